#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include "gsos/expr.hpp"

namespace gsos {

// Constructor tags across all languages. Each language's signature selects
// the subset it uses, so embeddings between languages are identity on trees.
enum class Ctor : std::uint8_t {
  Skip,
  Assign,    // l := e
  Seq,       // p ; q
  While,     // while e p
  Obs,       // obs n p
  Sandbox,   // label-erasing sandbox
  ToNat,     // negative-forgetting sandbox
  Frame,
  Return,
  Instr,     // single Low instruction
  InstrSeq,  // i ;; x
  SeqC,      // x ;;c y
  Loop,      // loop e x
};

std::string_view ctorName(Ctor c);

// A Low instruction; the constant carried by the Instr / InstrSeq forms.
struct Inst {
  enum class Op : std::uint8_t { Nop, Stop, Assign, Br };
  Op op = Op::Nop;
  Cell cell = 0;     // Assign target
  Expr expr;         // Assign source / Br guard
  Value offset = 0;  // Br relative target

  static Inst nop() { return {}; }
  static Inst stop() { return {Op::Stop, 0, Expr(), 0}; }
  static Inst assign(Cell l, Expr e) { return {Op::Assign, l, std::move(e), 0}; }
  static Inst br(Expr e, Value z) { return {Op::Br, 0, std::move(e), z}; }

  friend bool operator==(const Inst&, const Inst&) = default;
  friend std::strong_ordering operator<=>(const Inst&, const Inst&) = default;
};

// Constant-position values. Cell is the natural-number carrier (assignment
// targets, obs indices); Value is the integer carrier.
using Payload = std::variant<Cell, Value, Expr, Inst>;

std::uint64_t hashPayload(const Payload& p);

using VarId = std::uint32_t;

// Free-monad terms: variables or constructor nodes. A closed term (no
// variables) is a program. Immutable and structurally shared.
class Term {
 public:
  static Term var(VarId x);
  static Term node(Ctor tag, std::vector<Payload> payload, std::vector<Term> children);

  bool isVar() const;
  VarId varId() const;
  Ctor ctor() const;
  const std::vector<Payload>& payload() const;
  const std::vector<Term>& children() const;

  // Node count, variables included.
  std::size_t size() const;
  bool closed() const;
  std::uint64_t hash() const;

  // Monad multiplication: replaces each variable by a term.
  Term substitute(const std::function<Term(VarId)>& sigma) const;
  void collectVars(std::set<VarId>& out) const;
  // Same constructor and payload, new children.
  Term withChildren(std::vector<Term> children) const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return static_cast<std::size_t>(t.hash()); }
};

namespace build {

Term skip();
Term assign(Cell l, Expr e);
Term seq(Term p, Term q);
Term loopWhile(Expr e, Term body);
Term obs(Cell n, Term p);
Term sandbox(Term p);
Term toNat(Term p);
Term frame();
Term ret();
Term instr(Inst i);
Term instrSeq(Inst i, Term rest);
Term seqc(Term x, Term y);
Term loop(Expr e, Term body);
// Right-nested instruction sequence; `insts` must be nonempty.
Term program(const std::vector<Inst>& insts);

}  // namespace build

}  // namespace gsos
