#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsos/spf.hpp"
#include "gsos/state.hpp"

namespace gsos {

// One transition: output state, optional label, and the continuation
// (absent exactly when the step terminates). `totalized` marks steps that
// went through a totalizing convention (empty stack, sp = 0) and is not part
// of the observation.
struct StepOutcome {
  MachineState state;
  std::optional<Value> label;
  std::optional<Term> continuation;
  bool totalized = false;

  bool terminated() const { return !continuation.has_value(); }

  friend bool operator==(const StepOutcome& a, const StepOutcome& b) {
    return a.state == b.state && a.label == b.label && a.continuation == b.continuation;
  }
};

enum class Divergence : std::uint8_t { None, Label, State, ContinuationPresence, ContinuationTerm };
std::string_view divergenceName(Divergence d);

// First observable difference between two outcomes, in the order label,
// state, continuation presence, continuation term.
Divergence firstDivergence(const StepOutcome& a, const StepOutcome& b, bool compareTerms = true);

using Behavior = std::function<StepOutcome(const MachineState&)>;

// A subterm paired with its behavior: an element of Id × B.
struct ChildBehavior {
  Term term;
  Behavior behavior;
};

// ρ at one layer: the node's constructor and payload, its children's terms
// and behaviors, and the input. The continuation is built from child terms.
using RuleFn = std::function<StepOutcome(const Term& layer, std::span<const ChildBehavior> kids, const MachineState& in)>;

struct GsosLaw {
  std::string language;
  RuleFn rule;
};

// Finite behavior of a variable: explicit entries plus a deterministic
// generator, defined on a domain. Consulting outside the domain throws
// IncompleteTable until the table is widened.
class BehaviorTable {
 public:
  using Generator = std::function<StepOutcome(const MachineState&)>;
  using Domain = std::function<bool(const MachineState&)>;

  BehaviorTable() = default;
  BehaviorTable(Generator gen, Domain domain);

  void set(const MachineState& in, StepOutcome out);
  StepOutcome operator()(const MachineState& in) const;
  bool covers(const MachineState& in) const;
  void widen() { widened_ = true; }
  bool widened() const { return widened_; }

 private:
  std::map<MachineState, StepOutcome> entries_;
  Generator gen_;
  Domain domain_;
  bool widened_ = false;
};

// Interpretation of the variables of an open term: the term that stands for
// each variable and its behavior.
using Env = std::function<ChildBehavior(VarId)>;

// Environment over shared tables; variable x stands for itself.
Env tableEnv(std::shared_ptr<const std::map<VarId, BehaviorTable>> tables);
// Environment that rejects every variable (closed terms).
Env closedEnv();

struct LangDef {
  std::string name;
  Signature signature;
  StateKind inputKind = StateKind::Store;
  bool hasLabel = false;
  GsosLaw law;
  // Throws IllFormed.
  std::function<void(const Term&)> wellFormed;
  std::function<void(const MachineState&)> wellFormedState;
};

// One application of the law at the root layer of `layer`.
StepOutcome applyLaw(const GsosLaw& law, const Term& layer, std::span<const ChildBehavior> kids, const MachineState& in);

// ρ*: inductive extension of the law to free-monad terms.
StepOutcome extendLaw(const GsosLaw& law, const Term& t, const Env& env, const MachineState& in);

// ρ* together with the term component it threads (the copoint side).
std::pair<Term, StepOutcome> extendLawWithTerm(const GsosLaw& law, const Term& t, const Env& env, const MachineState& in);

// Operational model on closed terms.
StepOutcome step(const LangDef& lang, const Term& p, const MachineState& in);

struct RunResult {
  std::vector<StepOutcome> trace;
  bool terminated = false;
  MachineState state;
  std::optional<Term> residual;  // set when fuel ran out
  std::size_t totalized = 0;
};

RunResult run(const LangDef& lang, const Term& p, const MachineState& in, std::size_t fuel);

struct BehaviorTree {
  struct Branch {
    MachineState input;
    MachineState output;
    std::optional<Value> label;
    bool terminated = false;
    std::shared_ptr<const BehaviorTree> next;  // null when terminated or at the depth bound
  };
  std::vector<Branch> branches;
};

BehaviorTree unfold(const LangDef& lang, const Term& p, const std::vector<MachineState>& inputs, std::size_t depth);

// Bounded bisimilarity over a fixed input window; at every level each window
// input is tried (the attacker may pick any input between steps).
struct BisimResult {
  bool equivalent = true;
  std::size_t depth = 0;
  std::size_t inputs = 0;
  std::size_t pairs = 0;      // distinct term pairs visited
  std::size_t totalized = 0;  // steps that used a totalizing convention
  // Set when distinguished.
  std::vector<MachineState> path;
  std::vector<Term> leftTerms;   // terms stepped along the path
  std::vector<Term> rightTerms;
  std::optional<StepOutcome> left;
  std::optional<StepOutcome> right;
  Divergence divergence = Divergence::None;
};

using Stepper = std::function<StepOutcome(const Term&, const MachineState&)>;

BisimResult checkBisimWith(const Stepper& stepper, const Term& p, const Term& q,
                           const std::vector<MachineState>& inputs, std::size_t depth);
BisimResult checkBisim(const LangDef& lang, const Term& p, const Term& q,
                       const std::vector<MachineState>& inputs, std::size_t depth);
BisimResult checkBisimOpen(const LangDef& lang, const Term& p, const Term& q, const Env& env,
                           const std::vector<MachineState>& inputs, std::size_t depth);

}  // namespace gsos
