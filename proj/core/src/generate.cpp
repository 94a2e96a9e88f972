#include "gsos/generate.hpp"

#include <functional>
#include <map>

namespace gsos {

namespace {

constexpr BinOp kBinOps[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Lt, BinOp::Eq, BinOp::Min};

std::vector<Expr> atoms(const GenBounds& b) {
  std::vector<Expr> out;
  for (Value v = b.negativeLiterals ? -b.maxValue : 0; v <= b.maxValue; ++v) out.push_back(Expr::lit(v));
  for (Cell l = 0; l < b.cells; ++l) out.push_back(Expr::var(l));
  return out;
}

}  // namespace

std::vector<Expr> enumerateExprs(const GenBounds& bounds) {
  if (bounds.exprDepth == 0) return {};
  std::vector<Expr> all = atoms(bounds);
  std::vector<Expr> shallower = all;  // depth < d
  for (std::size_t d = 2; d <= bounds.exprDepth; ++d) {
    std::vector<Expr> fresh;
    for (BinOp op : kBinOps)
      for (const auto& a : shallower)
        for (const auto& b : shallower)
          if (std::max(a.depth(), b.depth()) == d - 1) fresh.push_back(Expr::bin(op, a, b));
    for (const auto& a : shallower)
      if (a.depth() == d - 1) fresh.push_back(Expr::un(UnOp::Not, a));
    all.insert(all.end(), fresh.begin(), fresh.end());
    shallower = all;
  }
  return all;
}

std::vector<Payload> carrierPool(Carrier c, const GenBounds& bounds) {
  std::vector<Payload> out;
  switch (c) {
    case Carrier::Nat:
      for (Cell l = 0; l < bounds.cells; ++l) out.emplace_back(l);
      break;
    case Carrier::Int:
      for (Value v = -bounds.maxValue; v <= bounds.maxValue; ++v) out.emplace_back(v);
      break;
    case Carrier::Expr: {
      GenBounds b = bounds;
      b.negativeLiterals = false;
      for (auto& e : enumerateExprs(b)) out.emplace_back(std::move(e));
      break;
    }
    case Carrier::IntExpr:
      for (auto& e : enumerateExprs(bounds)) out.emplace_back(std::move(e));
      break;
    case Carrier::Inst: {
      GenBounds b = bounds;
      b.negativeLiterals = false;
      auto exprs = enumerateExprs(b);
      out.emplace_back(Inst::nop());
      out.emplace_back(Inst::stop());
      for (Cell l = 0; l < bounds.cells; ++l)
        for (const auto& e : exprs) out.emplace_back(Inst::assign(l, e));
      for (const auto& e : exprs)
        for (Value z = bounds.minOffset; z <= bounds.maxOffset; ++z) out.emplace_back(Inst::br(e, z));
      break;
    }
  }
  return out;
}

std::vector<std::vector<Payload>> payloadTuples(const CtorSig& cs, const GenBounds& bounds) {
  std::vector<std::vector<Payload>> out{{}};
  for (const auto& f : cs.fields) {
    if (f.child) continue;
    auto pool = carrierPool(f.carrier, bounds);
    std::vector<std::vector<Payload>> next;
    next.reserve(out.size() * pool.size());
    for (const auto& prefix : out)
      for (const auto& p : pool) {
        next.push_back(prefix);
        next.back().push_back(p);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Term> enumerateLayers(const Signature& sig, const GenBounds& bounds) {
  std::vector<Term> out;
  for (const auto& cs : sig.ctors()) {
    std::vector<Term> vars;
    for (VarId i = 0; i < cs.arity(); ++i) vars.push_back(Term::var(i));
    for (auto& payload : payloadTuples(cs, bounds)) out.push_back(Term::node(cs.ctor, std::move(payload), vars));
  }
  return out;
}

namespace {

class TermEnumerator {
 public:
  TermEnumerator(const Signature& sig, const GenBounds& bounds, VarId vars, std::size_t cap)
      : sig_(sig), vars_(vars), cap_(cap) {
    for (const auto& cs : sig.ctors()) tuples_.push_back(payloadTuples(cs, bounds));
  }

  const std::vector<Term>& ofSize(std::size_t n) {
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (n == 1)
      for (VarId v = 0; v < vars_; ++v) out.push_back(Term::var(v));
    for (std::size_t c = 0; c < sig_.ctors().size() && out.size() < cap_; ++c) {
      const CtorSig& cs = sig_.ctors()[c];
      std::size_t k = cs.arity();
      if (k == 0) {
        if (n != 1) continue;
        for (const auto& p : tuples_[c]) {
          if (out.size() >= cap_) break;
          out.push_back(Term::node(cs.ctor, p, {}));
        }
        continue;
      }
      if (n < k + 1) continue;
      std::vector<std::size_t> sizes(k, 1);
      distribute(out, c, sizes, 0, n - 1 - k);
    }
    return memo_.emplace(n, std::move(out)).first->second;
  }

 private:
  // Spreads `extra` additional nodes over children i.. and emits each split.
  void distribute(std::vector<Term>& out, std::size_t c, std::vector<std::size_t>& sizes, std::size_t i,
                  std::size_t extra) {
    if (out.size() >= cap_) return;
    if (i + 1 == sizes.size()) {
      sizes[i] += extra;
      emit(out, c, sizes);
      sizes[i] -= extra;
      return;
    }
    for (std::size_t e = 0; e <= extra; ++e) {
      sizes[i] += e;
      distribute(out, c, sizes, i + 1, extra - e);
      sizes[i] -= e;
    }
  }

  void emit(std::vector<Term>& out, std::size_t c, const std::vector<std::size_t>& sizes) {
    std::vector<const std::vector<Term>*> pools;
    for (std::size_t s : sizes) {
      pools.push_back(&ofSize(s));
      if (pools.back()->empty()) return;
    }
    const CtorSig& cs = sig_.ctors()[c];
    std::vector<std::size_t> idx(sizes.size(), 0);
    while (true) {
      std::vector<Term> kids;
      for (std::size_t j = 0; j < idx.size(); ++j) kids.push_back((*pools[j])[idx[j]]);
      for (const auto& p : tuples_[c]) {
        if (out.size() >= cap_) return;
        out.push_back(Term::node(cs.ctor, p, kids));
      }
      std::size_t j = idx.size();
      while (j-- > 0) {
        if (++idx[j] < pools[j]->size()) break;
        idx[j] = 0;
      }
      if (j == SIZE_MAX) return;
    }
  }

  const Signature& sig_;
  VarId vars_;
  std::size_t cap_;
  std::vector<std::vector<std::vector<Payload>>> tuples_;
  std::map<std::size_t, std::vector<Term>> memo_;
};

}  // namespace

std::vector<Term> enumerateTermsOfSize(const Signature& sig, const GenBounds& bounds, std::size_t n, VarId vars,
                                       std::size_t cap) {
  if (n == 0) return {};
  TermEnumerator en(sig, bounds, vars, cap);
  return en.ofSize(n);
}

std::vector<Term> enumerateTerms(const Signature& sig, const GenBounds& bounds, std::size_t maxSize, VarId vars,
                                 std::size_t cap) {
  TermEnumerator en(sig, bounds, vars, cap);
  std::vector<Term> out;
  for (std::size_t n = 1; n <= maxSize && out.size() < cap; ++n) {
    const auto& terms = en.ofSize(n);
    for (const auto& t : terms) {
      if (out.size() >= cap) break;
      out.push_back(t);
    }
  }
  return out;
}

namespace {

Payload randomPayload(Carrier c, const GenBounds& bounds, Rng& rng, const std::vector<Expr>& exprs,
                      const std::vector<Expr>& natExprs) {
  switch (c) {
    case Carrier::Nat:
      return Payload(static_cast<Cell>(rng.below(bounds.cells)));
    case Carrier::Int:
      return Payload(rng.between(-bounds.maxValue, bounds.maxValue));
    case Carrier::Expr:
      return Payload(natExprs[rng.below(natExprs.size())]);
    case Carrier::IntExpr:
      return Payload(exprs[rng.below(exprs.size())]);
    case Carrier::Inst:
      switch (rng.below(4)) {
        case 0: return Payload(Inst::nop());
        case 1: return Payload(Inst::stop());
        case 2:
          return Payload(Inst::assign(rng.below(bounds.cells), natExprs[rng.below(natExprs.size())]));
        default:
          return Payload(Inst::br(natExprs[rng.below(natExprs.size())], rng.between(bounds.minOffset, bounds.maxOffset)));
      }
  }
  return Payload(Cell{0});
}

struct RandomSource {
  const Signature& sig;
  const GenBounds& bounds;
  Rng& rng;
  VarId vars;
  std::vector<Expr> exprs;
  std::vector<Expr> natExprs;

  RandomSource(const Signature& s, const GenBounds& b, Rng& r, VarId v) : sig(s), bounds(b), rng(r), vars(v) {
    exprs = enumerateExprs(b);
    GenBounds nb = b;
    nb.negativeLiterals = false;
    natExprs = enumerateExprs(nb);
    if (exprs.empty()) exprs.push_back(Expr::lit(0));
    if (natExprs.empty()) natExprs.push_back(Expr::lit(0));
  }

  std::vector<Payload> payloadFor(const CtorSig& cs) {
    std::vector<Payload> out;
    for (const auto& f : cs.fields)
      if (!f.child) out.push_back(randomPayload(f.carrier, bounds, rng, exprs, natExprs));
    return out;
  }

  Term term(std::size_t maxSize) {
    std::vector<const CtorSig*> fits;
    for (const auto& cs : sig.ctors())
      if (cs.arity() + 1 <= maxSize) fits.push_back(&cs);
    if (vars > 0 && (fits.empty() || rng.below(4) == 0)) return Term::var(static_cast<VarId>(rng.below(vars)));
    const CtorSig& cs = *fits[rng.below(fits.size())];
    std::size_t k = cs.arity();
    std::vector<Term> kids;
    std::size_t budget = maxSize - 1 - k;  // extra nodes beyond one per child
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t extra = i + 1 == k ? budget : rng.below(budget + 1);
      budget -= extra;
      kids.push_back(term(1 + extra));
    }
    return Term::node(cs.ctor, payloadFor(cs), std::move(kids));
  }
};

}  // namespace

Term randomTerm(const Signature& sig, const GenBounds& bounds, std::size_t maxSize, Rng& rng, VarId vars) {
  RandomSource src(sig, bounds, rng, vars);
  return src.term(std::max<std::size_t>(1, maxSize));
}

std::vector<Context> sampleContexts(const Signature& sig, const GenBounds& bounds, std::size_t maxLayers,
                                    std::size_t budget, std::uint64_t seed, std::size_t siblingSize) {
  std::vector<Context> out;
  if (budget == 0) return out;
  out.emplace_back();
  Rng rng(seed);
  RandomSource src(sig, bounds, rng, 0);
  std::vector<const CtorSig*> holders;
  for (const auto& cs : sig.ctors())
    if (cs.arity() > 0) holders.push_back(&cs);
  if (maxLayers == 0 || holders.empty()) {
    while (out.size() < budget) out.emplace_back();
    return out;
  }
  while (out.size() < budget) {
    std::size_t layers = 1 + rng.below(maxLayers);
    Context c;
    for (std::size_t i = 0; i < layers; ++i) {
      const CtorSig& cs = *holders[rng.below(holders.size())];
      OneHoleLayer layer{sig.language(), cs.ctor, static_cast<std::size_t>(rng.below(cs.arity())), {}, {}};
      layer.payload = src.payloadFor(cs);
      for (std::size_t j = 0; j + 1 < cs.arity(); ++j) layer.siblings.push_back(src.term(1 + rng.below(siblingSize)));
      c.push_back(std::move(layer));
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace gsos
