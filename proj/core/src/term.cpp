#include "gsos/term.hpp"

#include <stdexcept>

#include "gsos/hash.hpp"

namespace gsos {

std::string_view ctorName(Ctor c) {
  switch (c) {
    case Ctor::Skip: return "skip";
    case Ctor::Assign: return "assign";
    case Ctor::Seq: return "seq";
    case Ctor::While: return "while";
    case Ctor::Obs: return "obs";
    case Ctor::Sandbox: return "sandbox";
    case Ctor::ToNat: return "tonat";
    case Ctor::Frame: return "frame";
    case Ctor::Return: return "return";
    case Ctor::Instr: return "instr";
    case Ctor::InstrSeq: return "instr;;";
    case Ctor::SeqC: return "seqc";
    case Ctor::Loop: return "loop";
  }
  return "?";
}

std::uint64_t hashPayload(const Payload& p) {
  std::uint64_t h = hashCombine(0x9a7, p.index());
  return std::visit(
      [h](const auto& v) -> std::uint64_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Cell>) {
          return hashCombine(h, v);
        } else if constexpr (std::is_same_v<T, Value>) {
          return hashCombine(h, static_cast<std::uint64_t>(v));
        } else if constexpr (std::is_same_v<T, Expr>) {
          return hashCombine(h, v.hash());
        } else {
          std::uint64_t k = hashCombine(h, static_cast<std::uint64_t>(v.op));
          k = hashCombine(k, v.cell);
          k = hashCombine(k, v.expr.hash());
          return hashCombine(k, static_cast<std::uint64_t>(v.offset));
        }
      },
      p);
}

struct Term::Node {
  bool isVar = false;
  VarId var = 0;
  Ctor tag = Ctor::Skip;
  std::vector<Payload> payload;
  std::vector<Term> children;
  std::size_t size = 1;
  bool closed = true;
  std::uint64_t hash = 0;
};

Term Term::var(VarId x) {
  auto node = std::make_shared<Node>();
  node->isVar = true;
  node->var = x;
  node->closed = false;
  node->hash = hashCombine(0xfa7, x);
  return Term(std::move(node));
}

Term Term::node(Ctor tag, std::vector<Payload> payload, std::vector<Term> children) {
  auto node = std::make_shared<Node>();
  node->tag = tag;
  std::uint64_t h = hashCombine(0x7e4, static_cast<std::uint64_t>(tag));
  for (const auto& p : payload) h = hashCombine(h, hashPayload(p));
  for (const auto& c : children) {
    node->size += c.size();
    node->closed = node->closed && c.closed();
    h = hashCombine(h, c.hash());
  }
  node->hash = h;
  node->payload = std::move(payload);
  node->children = std::move(children);
  return Term(std::move(node));
}

bool Term::isVar() const { return node_->isVar; }
VarId Term::varId() const { return node_->var; }
Ctor Term::ctor() const { return node_->tag; }
const std::vector<Payload>& Term::payload() const { return node_->payload; }
const std::vector<Term>& Term::children() const { return node_->children; }
std::size_t Term::size() const { return node_->size; }
bool Term::closed() const { return node_->closed; }
std::uint64_t Term::hash() const { return node_->hash; }

Term Term::substitute(const std::function<Term(VarId)>& sigma) const {
  if (isVar()) return sigma(varId());
  if (closed()) return *this;
  std::vector<Term> kids;
  kids.reserve(children().size());
  for (const auto& c : children()) kids.push_back(c.substitute(sigma));
  return node(ctor(), payload(), std::move(kids));
}

void Term::collectVars(std::set<VarId>& out) const {
  if (isVar()) {
    out.insert(varId());
    return;
  }
  if (closed()) return;
  for (const auto& c : children()) c.collectVars(out);
}

Term Term::withChildren(std::vector<Term> kids) const {
  if (isVar()) throw std::logic_error("withChildren on a variable");
  return node(ctor(), payload(), std::move(kids));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = b.isVar() <=> a.isVar(); c != 0) return c;  // variables first
  if (a.isVar()) return a.varId() <=> b.varId();
  if (auto c = a.ctor() <=> b.ctor(); c != 0) return c;
  if (auto c = a.payload().size() <=> b.payload().size(); c != 0) return c;
  for (std::size_t i = 0; i < a.payload().size(); ++i) {
    const auto& pa = a.payload()[i];
    const auto& pb = b.payload()[i];
    if (auto c = pa.index() <=> pb.index(); c != 0) return c;
    auto c = std::visit(
        [&pb](const auto& va) -> std::strong_ordering {
          return va <=> std::get<std::decay_t<decltype(va)>>(pb);
        },
        pa);
    if (c != 0) return c;
  }
  if (auto c = a.children().size() <=> b.children().size(); c != 0) return c;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (auto c = a.children()[i] <=> b.children()[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

namespace build {

Term skip() { return Term::node(Ctor::Skip, {}, {}); }
Term assign(Cell l, Expr e) { return Term::node(Ctor::Assign, {Payload(l), Payload(std::move(e))}, {}); }
Term seq(Term p, Term q) { return Term::node(Ctor::Seq, {}, {std::move(p), std::move(q)}); }
Term loopWhile(Expr e, Term body) { return Term::node(Ctor::While, {Payload(std::move(e))}, {std::move(body)}); }
Term obs(Cell n, Term p) { return Term::node(Ctor::Obs, {Payload(n)}, {std::move(p)}); }
Term sandbox(Term p) { return Term::node(Ctor::Sandbox, {}, {std::move(p)}); }
Term toNat(Term p) { return Term::node(Ctor::ToNat, {}, {std::move(p)}); }
Term frame() { return Term::node(Ctor::Frame, {}, {}); }
Term ret() { return Term::node(Ctor::Return, {}, {}); }
Term instr(Inst i) { return Term::node(Ctor::Instr, {Payload(std::move(i))}, {}); }
Term instrSeq(Inst i, Term rest) { return Term::node(Ctor::InstrSeq, {Payload(std::move(i))}, {std::move(rest)}); }
Term seqc(Term x, Term y) { return Term::node(Ctor::SeqC, {}, {std::move(x), std::move(y)}); }
Term loop(Expr e, Term body) { return Term::node(Ctor::Loop, {Payload(std::move(e))}, {std::move(body)}); }

Term program(const std::vector<Inst>& insts) {
  if (insts.empty()) throw std::invalid_argument("Low programs are nonempty");
  Term t = instr(insts.back());
  for (auto it = insts.rbegin() + 1; it != insts.rend(); ++it) t = instrSeq(*it, std::move(t));
  return t;
}

}  // namespace build

}  // namespace gsos
