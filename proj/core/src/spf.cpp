#include "gsos/spf.hpp"

#include <limits>

#include "gsos/error.hpp"

namespace gsos {

struct SpfExpr::Node {
  Kind kind = Kind::Zero;
  std::string carrier;
  std::vector<SpfExpr> kids;
};

namespace {

SpfExpr::Kind kindOf(const SpfExpr& f) { return f.kind(); }

bool isZero(const SpfExpr& f) { return kindOf(f) == SpfExpr::Kind::Zero; }
bool isOne(const SpfExpr& f) { return kindOf(f) == SpfExpr::Kind::One; }

std::uint64_t satAdd(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::uint64_t satMul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > std::numeric_limits<std::uint64_t>::max() / b ? std::numeric_limits<std::uint64_t>::max() : a * b;
}

}  // namespace

SpfExpr SpfExpr::zero() { return SpfExpr(std::make_shared<Node>(Node{Kind::Zero, {}, {}})); }
SpfExpr SpfExpr::one() { return SpfExpr(std::make_shared<Node>(Node{Kind::One, {}, {}})); }
SpfExpr SpfExpr::id() { return SpfExpr(std::make_shared<Node>(Node{Kind::Id, {}, {}})); }
SpfExpr SpfExpr::constant(std::string carrier) {
  return SpfExpr(std::make_shared<Node>(Node{Kind::Const, std::move(carrier), {}}));
}
SpfExpr SpfExpr::sum(SpfExpr l, SpfExpr r) {
  return SpfExpr(std::make_shared<Node>(Node{Kind::Sum, {}, {std::move(l), std::move(r)}}));
}
SpfExpr SpfExpr::product(SpfExpr l, SpfExpr r) {
  return SpfExpr(std::make_shared<Node>(Node{Kind::Product, {}, {std::move(l), std::move(r)}}));
}
SpfExpr SpfExpr::compose(SpfExpr outer, SpfExpr inner) {
  return SpfExpr(std::make_shared<Node>(Node{Kind::Compose, {}, {std::move(outer), std::move(inner)}}));
}

SpfExpr::Kind SpfExpr::kind() const { return node_->kind; }
const std::string& SpfExpr::carrier() const { return node_->carrier; }
const SpfExpr& SpfExpr::left() const { return node_->kids.at(0); }
const SpfExpr& SpfExpr::right() const { return node_->kids.at(1); }

bool operator==(const SpfExpr& a, const SpfExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case SpfExpr::Kind::Zero:
    case SpfExpr::Kind::One:
    case SpfExpr::Kind::Id:
      return true;
    case SpfExpr::Kind::Const:
      return a.carrier() == b.carrier();
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

std::string toString(const SpfExpr& f) {
  switch (f.kind()) {
    case SpfExpr::Kind::Zero: return "⊥";
    case SpfExpr::Kind::One: return "⊤";
    case SpfExpr::Kind::Id: return "Id";
    case SpfExpr::Kind::Const: return "K_" + f.carrier();
    case SpfExpr::Kind::Sum: return "(" + toString(f.left()) + " ⊎ " + toString(f.right()) + ")";
    case SpfExpr::Kind::Product: return "(" + toString(f.left()) + " × " + toString(f.right()) + ")";
    case SpfExpr::Kind::Compose: return "(" + toString(f.left()) + " ∘ " + toString(f.right()) + ")";
  }
  return "?";
}

namespace {

SpfExpr pruneSum(SpfExpr l, SpfExpr r) {
  if (isZero(l)) return r;
  if (isZero(r)) return l;
  return SpfExpr::sum(std::move(l), std::move(r));
}

SpfExpr pruneProduct(SpfExpr l, SpfExpr r) {
  if (isZero(l) || isZero(r)) return SpfExpr::zero();
  if (isOne(l)) return r;
  if (isOne(r)) return l;
  return SpfExpr::product(std::move(l), std::move(r));
}

SpfExpr pruneCompose(SpfExpr outer, SpfExpr inner) {
  if (isZero(outer) || isOne(outer) || outer.kind() == SpfExpr::Kind::Const) return outer;
  if (outer.kind() == SpfExpr::Kind::Id) return inner;
  return SpfExpr::compose(std::move(outer), std::move(inner));
}

}  // namespace

SpfExpr derive(const SpfExpr& f) {
  switch (f.kind()) {
    case SpfExpr::Kind::Zero:
    case SpfExpr::Kind::One:
    case SpfExpr::Kind::Const:
      return SpfExpr::zero();
    case SpfExpr::Kind::Id:
      return SpfExpr::one();
    case SpfExpr::Kind::Sum:
      return pruneSum(derive(f.left()), derive(f.right()));
    case SpfExpr::Kind::Product:
      return pruneSum(pruneProduct(derive(f.left()), f.right()), pruneProduct(f.left(), derive(f.right())));
    case SpfExpr::Kind::Compose:
      return pruneProduct(pruneCompose(derive(f.left()), f.right()), derive(f.right()));
  }
  return SpfExpr::zero();
}

std::uint64_t countPositions(const SpfExpr& f, const CarrierSizes& sizes, std::uint64_t n) {
  switch (f.kind()) {
    case SpfExpr::Kind::Zero: return 0;
    case SpfExpr::Kind::One: return 1;
    case SpfExpr::Kind::Id: return n;
    case SpfExpr::Kind::Const: {
      auto it = sizes.find(f.carrier());
      if (it == sizes.end()) throw UnknownName("no size for carrier " + f.carrier());
      return it->second;
    }
    case SpfExpr::Kind::Sum:
      return satAdd(countPositions(f.left(), sizes, n), countPositions(f.right(), sizes, n));
    case SpfExpr::Kind::Product:
      return satMul(countPositions(f.left(), sizes, n), countPositions(f.right(), sizes, n));
    case SpfExpr::Kind::Compose:
      return countPositions(f.left(), sizes, countPositions(f.right(), sizes, n));
  }
  return 0;
}

SpfValue conStep(const SpfExpr& f, const HoleValue& d, const SpfValue& filler) {
  switch (d.kind) {
    case HoleValue::Kind::Hole:
      if (f.kind() != SpfExpr::Kind::Id) throw IllFormed("hole outside an Id position");
      return filler;
    case HoleValue::Kind::DInl:
      return SpfValue::inl(conStep(f.left(), d.dkids.at(0), filler));
    case HoleValue::Kind::DInr:
      return SpfValue::inr(conStep(f.right(), d.dkids.at(0), filler));
    case HoleValue::Kind::DLeft:
      return SpfValue::pair(conStep(f.left(), d.dkids.at(0), filler), d.vals.at(0));
    case HoleValue::Kind::DRight:
      return SpfValue::pair(d.vals.at(0), conStep(f.right(), d.dkids.at(0), filler));
    case HoleValue::Kind::DComp: {
      SpfValue inner = conStep(f.right(), d.dkids.at(1), filler);
      return conStep(f.left(), d.dkids.at(0), inner);
    }
  }
  return filler;
}

std::vector<SpfValue> enumerateValues(const SpfExpr& f, const CarrierSizes& sizes,
                                      const std::vector<SpfValue>& leaves) {
  std::vector<SpfValue> out;
  switch (f.kind()) {
    case SpfExpr::Kind::Zero:
      break;
    case SpfExpr::Kind::One:
      out.push_back(SpfValue::unit());
      break;
    case SpfExpr::Kind::Id:
      out = leaves;
      break;
    case SpfExpr::Kind::Const: {
      std::uint64_t n = countPositions(f, sizes, 0);
      for (std::uint64_t i = 0; i < n; ++i) out.push_back(SpfValue::constOf(Payload(Cell{i})));
      break;
    }
    case SpfExpr::Kind::Sum:
      for (auto& v : enumerateValues(f.left(), sizes, leaves)) out.push_back(SpfValue::inl(std::move(v)));
      for (auto& v : enumerateValues(f.right(), sizes, leaves)) out.push_back(SpfValue::inr(std::move(v)));
      break;
    case SpfExpr::Kind::Product: {
      auto ls = enumerateValues(f.left(), sizes, leaves);
      auto rs = enumerateValues(f.right(), sizes, leaves);
      for (const auto& a : ls)
        for (const auto& b : rs) out.push_back(SpfValue::pair(a, b));
      break;
    }
    case SpfExpr::Kind::Compose:
      out = enumerateValues(f.left(), sizes, enumerateValues(f.right(), sizes, leaves));
      break;
  }
  return out;
}

std::vector<HoleValue> enumerateHoleValues(const SpfExpr& f, const CarrierSizes& sizes,
                                           const std::vector<SpfValue>& leaves) {
  std::vector<HoleValue> out;
  switch (f.kind()) {
    case SpfExpr::Kind::Zero:
    case SpfExpr::Kind::One:
    case SpfExpr::Kind::Const:
      break;
    case SpfExpr::Kind::Id:
      out.push_back(HoleValue{});
      break;
    case SpfExpr::Kind::Sum:
      for (auto& d : enumerateHoleValues(f.left(), sizes, leaves))
        out.push_back(HoleValue{HoleValue::Kind::DInl, {std::move(d)}, {}});
      for (auto& d : enumerateHoleValues(f.right(), sizes, leaves))
        out.push_back(HoleValue{HoleValue::Kind::DInr, {std::move(d)}, {}});
      break;
    case SpfExpr::Kind::Product: {
      auto dl = enumerateHoleValues(f.left(), sizes, leaves);
      auto rs = enumerateValues(f.right(), sizes, leaves);
      for (const auto& d : dl)
        for (const auto& r : rs) out.push_back(HoleValue{HoleValue::Kind::DLeft, {d}, {r}});
      auto ls = enumerateValues(f.left(), sizes, leaves);
      auto dr = enumerateHoleValues(f.right(), sizes, leaves);
      for (const auto& l : ls)
        for (const auto& d : dr) out.push_back(HoleValue{HoleValue::Kind::DRight, {d}, {l}});
      break;
    }
    case SpfExpr::Kind::Compose: {
      auto outer = enumerateHoleValues(f.left(), sizes, enumerateValues(f.right(), sizes, leaves));
      auto inner = enumerateHoleValues(f.right(), sizes, leaves);
      for (const auto& a : outer)
        for (const auto& b : inner) out.push_back(HoleValue{HoleValue::Kind::DComp, {a, b}, {}});
      break;
    }
  }
  return out;
}

std::vector<std::pair<HoleValue, SpfValue>> decompose(const SpfExpr& f, const SpfValue& v) {
  std::vector<std::pair<HoleValue, SpfValue>> out;
  switch (f.kind()) {
    case SpfExpr::Kind::Zero:
    case SpfExpr::Kind::One:
    case SpfExpr::Kind::Const:
      break;
    case SpfExpr::Kind::Id:
      out.emplace_back(HoleValue{}, v);
      break;
    case SpfExpr::Kind::Sum:
      if (v.kind == SpfValue::Kind::Inl) {
        for (auto& [d, x] : decompose(f.left(), v.kids.at(0)))
          out.emplace_back(HoleValue{HoleValue::Kind::DInl, {std::move(d)}, {}}, std::move(x));
      } else {
        for (auto& [d, x] : decompose(f.right(), v.kids.at(0)))
          out.emplace_back(HoleValue{HoleValue::Kind::DInr, {std::move(d)}, {}}, std::move(x));
      }
      break;
    case SpfExpr::Kind::Product:
      for (auto& [d, x] : decompose(f.left(), v.kids.at(0)))
        out.emplace_back(HoleValue{HoleValue::Kind::DLeft, {std::move(d)}, {v.kids.at(1)}}, std::move(x));
      for (auto& [d, x] : decompose(f.right(), v.kids.at(1)))
        out.emplace_back(HoleValue{HoleValue::Kind::DRight, {std::move(d)}, {v.kids.at(0)}}, std::move(x));
      break;
    case SpfExpr::Kind::Compose:
      for (auto& [dOuter, innerValue] : decompose(f.left(), v))
        for (auto& [dInner, x] : decompose(f.right(), innerValue))
          out.emplace_back(HoleValue{HoleValue::Kind::DComp, {dOuter, std::move(dInner)}, {}}, std::move(x));
      break;
  }
  return out;
}

std::size_t countLeaves(const SpfValue& v) {
  if (v.kind == SpfValue::Kind::Leaf) return 1;
  std::size_t n = 0;
  for (const auto& k : v.kids) n += countLeaves(k);
  return n;
}

std::string_view carrierName(Carrier c) {
  switch (c) {
    case Carrier::Nat: return "Nat";
    case Carrier::Int: return "Int";
    case Carrier::Expr: return "Expr";
    case Carrier::IntExpr: return "IntExpr";
    case Carrier::Inst: return "Inst";
  }
  return "?";
}

std::size_t CtorSig::arity() const {
  std::size_t n = 0;
  for (const auto& f : fields) n += f.child ? 1 : 0;
  return n;
}

std::size_t CtorSig::payloadCount() const { return fields.size() - arity(); }

Signature::Signature(std::string language, std::vector<CtorSig> ctors)
    : language_(std::move(language)), ctors_(std::move(ctors)) {}

bool Signature::has(Ctor c) const {
  for (const auto& s : ctors_)
    if (s.ctor == c) return true;
  return false;
}

std::size_t Signature::indexOf(Ctor c) const {
  for (std::size_t i = 0; i < ctors_.size(); ++i)
    if (ctors_[i].ctor == c) return i;
  throw LanguageMismatch(std::string(ctorName(c)) + " is not a constructor of " + language_);
}

const CtorSig& Signature::at(Ctor c) const { return ctors_[indexOf(c)]; }

namespace {

SpfExpr fieldsSpf(const std::vector<Field>& fields, std::size_t from) {
  if (from == fields.size()) return SpfExpr::one();
  const Field& f = fields[from];
  SpfExpr head = f.child ? SpfExpr::id() : SpfExpr::constant(std::string(carrierName(f.carrier)));
  if (from + 1 == fields.size()) return head;
  return SpfExpr::product(head, fieldsSpf(fields, from + 1));
}

bool payloadFits(Carrier c, const Payload& p) {
  switch (c) {
    case Carrier::Nat: return std::holds_alternative<Cell>(p);
    case Carrier::Int: return std::holds_alternative<Value>(p);
    case Carrier::Expr:
    case Carrier::IntExpr: return std::holds_alternative<Expr>(p);
    case Carrier::Inst: return std::holds_alternative<Inst>(p);
  }
  return false;
}

}  // namespace

SpfExpr Signature::spf() const {
  if (ctors_.empty()) return SpfExpr::zero();
  SpfExpr out = fieldsSpf(ctors_.back().fields, 0);
  for (std::size_t i = ctors_.size() - 1; i-- > 0;) out = SpfExpr::sum(fieldsSpf(ctors_[i].fields, 0), out);
  return out;
}

void Signature::checkMember(const Term& t) const {
  if (t.isVar()) return;
  if (!has(t.ctor())) throw LanguageMismatch(std::string(ctorName(t.ctor())) + " is not a constructor of " + language_);
  const CtorSig& s = at(t.ctor());
  if (t.children().size() != s.arity() || t.payload().size() != s.payloadCount())
    throw LanguageMismatch("malformed " + s.name + " node in " + language_);
  std::size_t p = 0;
  for (const auto& f : s.fields) {
    if (f.child) continue;
    if (!payloadFits(f.carrier, t.payload()[p++]))
      throw LanguageMismatch("payload of " + s.name + " is not " + std::string(carrierName(f.carrier)));
  }
  for (const auto& c : t.children()) checkMember(c);
}

SpfValue Signature::toSpf(const Term& layer) const {
  if (layer.isVar()) throw IllFormed("a variable is not a syntax layer");
  std::size_t idx = indexOf(layer.ctor());
  const auto& fields = ctors_[idx].fields;
  std::vector<SpfValue> parts;
  std::size_t c = 0;
  std::size_t p = 0;
  for (const auto& f : fields)
    parts.push_back(f.child ? SpfValue::leafOf(layer.children().at(c++)) : SpfValue::constOf(layer.payload().at(p++)));
  SpfValue v = SpfValue::unit();
  if (!parts.empty()) {
    v = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) v = SpfValue::pair(parts[i], std::move(v));
  }
  // Injection into the right-nested sum.
  if (idx + 1 < ctors_.size()) v = SpfValue::inl(std::move(v));
  for (std::size_t i = 0; i < idx; ++i) v = SpfValue::inr(std::move(v));
  return v;
}

Term Signature::fromSpf(const SpfValue& v) const {
  const SpfValue* cur = &v;
  std::size_t idx = 0;
  while (idx + 1 < ctors_.size()) {
    if (cur->kind == SpfValue::Kind::Inl) {
      cur = &cur->kids.at(0);
      break;
    }
    if (cur->kind != SpfValue::Kind::Inr) throw IllFormed("value is not a " + language_ + " layer");
    cur = &cur->kids.at(0);
    ++idx;
  }
  const auto& fields = ctors_.at(idx).fields;
  std::vector<Payload> payload;
  std::vector<Term> kids;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const SpfValue* part = cur;
    if (i + 1 < fields.size()) {
      if (cur->kind != SpfValue::Kind::Pair) throw IllFormed("value is not a " + language_ + " layer");
      part = &cur->kids.at(0);
      cur = &cur->kids.at(1);
    }
    if (fields[i].child) {
      if (part->kind != SpfValue::Kind::Leaf) throw IllFormed("expected a subterm");
      kids.push_back(part->leaf.at(0));
    } else {
      if (part->kind != SpfValue::Kind::Const) throw IllFormed("expected a constant");
      payload.push_back(part->payload.at(0));
    }
  }
  return Term::node(ctors_[idx].ctor, std::move(payload), std::move(kids));
}

HoleValue toHoleValue(const Signature& sig, const OneHoleLayer& layer) {
  if (layer.language != sig.language())
    throw LanguageMismatch("layer of " + layer.language + " used with " + sig.language());
  std::size_t idx = sig.indexOf(layer.ctor);
  const auto& fields = sig.ctors()[idx].fields;
  const CtorSig& cs = sig.ctors()[idx];
  if (layer.hole >= cs.arity() || layer.siblings.size() + 1 != cs.arity() || layer.payload.size() != cs.payloadCount())
    throw IllFormed("malformed one-hole layer for " + cs.name);

  // Locate the field index of the hole and the SpfValues of every field.
  std::vector<SpfValue> parts;
  std::size_t holeField = 0;
  std::size_t child = 0;
  std::size_t sib = 0;
  std::size_t p = 0;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (!fields[i].child) {
      parts.push_back(SpfValue::constOf(layer.payload[p++]));
    } else if (child++ == layer.hole) {
      holeField = i;
      parts.push_back(SpfValue::unit());
    } else {
      parts.push_back(SpfValue::leafOf(layer.siblings[sib++]));
    }
  }

  // Build the derivative of the right-nested product from the inside out.
  auto restValue = [&](std::size_t from) {
    SpfValue v = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > from;) v = SpfValue::pair(parts[i], std::move(v));
    return v;
  };
  HoleValue d;  // Hole at the Id field
  if (holeField + 1 < fields.size()) d = HoleValue{HoleValue::Kind::DLeft, {std::move(d)}, {restValue(holeField + 1)}};
  for (std::size_t i = holeField; i-- > 0;) d = HoleValue{HoleValue::Kind::DRight, {std::move(d)}, {parts[i]}};

  if (idx + 1 < sig.ctors().size()) d = HoleValue{HoleValue::Kind::DInl, {std::move(d)}, {}};
  for (std::size_t i = 0; i < idx; ++i) d = HoleValue{HoleValue::Kind::DInr, {std::move(d)}, {}};
  return d;
}

Term conStep(const Signature& sig, const OneHoleLayer& layer, const Term& filler) {
  sig.checkMember(filler);
  HoleValue d = toHoleValue(sig, layer);
  return sig.fromSpf(conStep(sig.spf(), d, SpfValue::leafOf(filler)));
}

Term plug(const Signature& sig, const Context& c, const Term& p) {
  Term t = p;
  for (auto it = c.rbegin(); it != c.rend(); ++it) t = conStep(sig, *it, t);
  if (c.empty()) sig.checkMember(p);
  return t;
}

namespace {

void splitInto(const Signature& sig, const Term& t, Context& prefix, std::vector<std::pair<Context, Term>>& out) {
  out.emplace_back(prefix, t);
  if (t.isVar()) return;
  const auto& kids = t.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    OneHoleLayer layer{sig.language(), t.ctor(), i, {}, t.payload()};
    for (std::size_t j = 0; j < kids.size(); ++j)
      if (j != i) layer.siblings.push_back(kids[j]);
    prefix.push_back(std::move(layer));
    splitInto(sig, kids[i], prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::pair<Context, Term>> decompositions(const Signature& sig, const Term& t) {
  std::vector<std::pair<Context, Term>> out;
  Context prefix;
  splitInto(sig, t, prefix, out);
  return out;
}

Term plugMulti(const Signature& sig, const MultiHoleContext& c, const Term& p) {
  if (c.hole) {
    sig.checkMember(p);
    return p;
  }
  const CtorSig& cs = sig.at(c.ctor);
  if (c.children.size() != cs.arity() || c.payload.size() != cs.payloadCount())
    throw LanguageMismatch("malformed " + cs.name + " context layer in " + sig.language());
  std::vector<Term> kids;
  kids.reserve(c.children.size());
  for (const auto& k : c.children) kids.push_back(plugMulti(sig, k, p));
  return Term::node(c.ctor, c.payload, std::move(kids));
}

MultiHoleContext fromTerm(const Term& t) {
  if (t.isVar()) throw IllFormed("open term has no multi-hole reading");
  std::vector<MultiHoleContext> kids;
  for (const auto& k : t.children()) kids.push_back(fromTerm(k));
  return MultiHoleContext::layer(t.ctor(), t.payload(), std::move(kids));
}

MultiHoleContext toMulti(const Context& c) {
  MultiHoleContext m = MultiHoleContext::holeCtx();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    std::vector<MultiHoleContext> kids;
    std::size_t sib = 0;
    for (std::size_t i = 0; i < it->siblings.size() + 1; ++i)
      kids.push_back(i == it->hole ? m : fromTerm(it->siblings[sib++]));
    m = MultiHoleContext::layer(it->ctor, it->payload, std::move(kids));
  }
  return m;
}

}  // namespace gsos
