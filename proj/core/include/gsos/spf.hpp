#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gsos/term.hpp"

namespace gsos {

// Symbolic simple polynomial functor: Id, constants, sums, products and
// composition. No fixed points.
class SpfExpr {
 public:
  enum class Kind : std::uint8_t { Zero, One, Id, Const, Sum, Product, Compose };

  static SpfExpr zero();
  static SpfExpr one();
  static SpfExpr id();
  static SpfExpr constant(std::string carrier);
  static SpfExpr sum(SpfExpr l, SpfExpr r);
  static SpfExpr product(SpfExpr l, SpfExpr r);
  // outer ∘ inner
  static SpfExpr compose(SpfExpr outer, SpfExpr inner);

  Kind kind() const;
  const std::string& carrier() const;
  const SpfExpr& left() const;   // Sum/Product left, Compose outer
  const SpfExpr& right() const;  // Sum/Product right, Compose inner

  friend bool operator==(const SpfExpr& a, const SpfExpr& b);

 private:
  struct Node;
  explicit SpfExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::string toString(const SpfExpr& f);

// Symbolic derivative, with ⊥ and ⊤ pruned where they are units or
// absorbing elements.
SpfExpr derive(const SpfExpr& f);

using CarrierSizes = std::map<std::string, std::uint64_t>;

// |F X| for |X| = n. Saturates at UINT64_MAX. Throws UnknownName for a
// carrier missing from `sizes`.
std::uint64_t countPositions(const SpfExpr& f, const CarrierSizes& sizes, std::uint64_t n);

// An element of F X. Leaf holds an element of X (a Term); in a composite
// G ∘ H, G's Id slots hold H-values directly.
struct SpfValue {
  enum class Kind : std::uint8_t { Unit, Leaf, Const, Inl, Inr, Pair };
  Kind kind = Kind::Unit;
  std::vector<Term> leaf;  // one element for Leaf
  std::vector<Payload> payload;  // one element for Const
  std::vector<SpfValue> kids;    // Inl/Inr: 1, Pair: 2

  static SpfValue unit() { return {}; }
  static SpfValue leafOf(Term t) { return {Kind::Leaf, {std::move(t)}, {}, {}}; }
  static SpfValue constOf(Payload p) { return {Kind::Const, {}, {std::move(p)}, {}}; }
  static SpfValue inl(SpfValue v) { return {Kind::Inl, {}, {}, {std::move(v)}}; }
  static SpfValue inr(SpfValue v) { return {Kind::Inr, {}, {}, {std::move(v)}}; }
  static SpfValue pair(SpfValue a, SpfValue b) { return {Kind::Pair, {}, {}, {std::move(a), std::move(b)}}; }

  friend bool operator==(const SpfValue&, const SpfValue&) = default;
};

// An element of ∂F X, structured by F:
//   Id: Hole; G⊎H: DInl/DInr; G×H: DLeft(∂G, H) / DRight(G, ∂H);
//   G∘H: DComp(∂G over H X, ∂H).
struct HoleValue {
  enum class Kind : std::uint8_t { Hole, DInl, DInr, DLeft, DRight, DComp };
  Kind kind = Kind::Hole;
  std::vector<HoleValue> dkids;
  std::vector<SpfValue> vals;

  friend bool operator==(const HoleValue&, const HoleValue&) = default;
};

// Inserts the filler at the hole: ∂F × Id ⇒ F.
SpfValue conStep(const SpfExpr& f, const HoleValue& d, const SpfValue& filler);

// Brute-force enumeration; Const carriers draw payload Cell(0..size-1).
std::vector<SpfValue> enumerateValues(const SpfExpr& f, const CarrierSizes& sizes,
                                      const std::vector<SpfValue>& leaves);
std::vector<HoleValue> enumerateHoleValues(const SpfExpr& f, const CarrierSizes& sizes,
                                           const std::vector<SpfValue>& leaves);
// All (d, x) with conStep(f, d, x) == v.
std::vector<std::pair<HoleValue, SpfValue>> decompose(const SpfExpr& f, const SpfValue& v);
// Number of X-leaves in v.
std::size_t countLeaves(const SpfValue& v);

// Syntax signatures: each constructor is a product of fields, each field a
// child (Id) or a constant carrier.
enum class Carrier : std::uint8_t { Nat, Int, Expr, IntExpr, Inst };
std::string_view carrierName(Carrier c);

struct Field {
  bool child = true;
  Carrier carrier = Carrier::Nat;
  static Field id() { return {true, Carrier::Nat}; }
  static Field of(Carrier c) { return {false, c}; }
};

struct CtorSig {
  Ctor ctor;
  std::string name;
  std::vector<Field> fields;
  std::size_t arity() const;
  std::size_t payloadCount() const;
};

class Signature {
 public:
  Signature() = default;
  Signature(std::string language, std::vector<CtorSig> ctors);

  const std::string& language() const { return language_; }
  const std::vector<CtorSig>& ctors() const { return ctors_; }
  bool has(Ctor c) const;
  const CtorSig& at(Ctor c) const;
  std::size_t indexOf(Ctor c) const;

  // Right-nested sum of right-nested products; nullary constructors are ⊤.
  SpfExpr spf() const;
  // Throws LanguageMismatch if any node of t is not in the signature, or its
  // shape is wrong.
  void checkMember(const Term& t) const;

  SpfValue toSpf(const Term& layer) const;
  Term fromSpf(const SpfValue& v) const;

 private:
  std::string language_;
  std::vector<CtorSig> ctors_;
};

// One layer of ∂Σ(Term): a constructor with one child position marked.
struct OneHoleLayer {
  std::string language;
  Ctor ctor = Ctor::Skip;
  std::size_t hole = 0;            // child index
  std::vector<Term> siblings;      // other children, in order
  std::vector<Payload> payload;

  friend bool operator==(const OneHoleLayer&, const OneHoleLayer&) = default;
};

// Outermost layer first; empty is the bare hole.
using Context = std::vector<OneHoleLayer>;

HoleValue toHoleValue(const Signature& sig, const OneHoleLayer& layer);
Term conStep(const Signature& sig, const OneHoleLayer& layer, const Term& filler);
Term plug(const Signature& sig, const Context& c, const Term& p);

// Every (context, subterm) split of t, root first in preorder.
std::vector<std::pair<Context, Term>> decompositions(const Signature& sig, const Term& t);

struct MultiHoleContext {
  bool hole = true;
  Ctor ctor = Ctor::Skip;
  std::vector<Payload> payload;
  std::vector<MultiHoleContext> children;

  static MultiHoleContext holeCtx() { return {}; }
  static MultiHoleContext layer(Ctor c, std::vector<Payload> payload, std::vector<MultiHoleContext> kids) {
    return {false, c, std::move(payload), std::move(kids)};
  }
};

Term plugMulti(const Signature& sig, const MultiHoleContext& c, const Term& p);
// A single-hole context as a multi-hole one (siblings become hole-free layers).
MultiHoleContext toMulti(const Context& c);
MultiHoleContext fromTerm(const Term& t);

}  // namespace gsos
