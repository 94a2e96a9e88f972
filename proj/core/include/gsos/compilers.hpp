#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsos/languages.hpp"

namespace gsos {

// Either a per-layer translation Σ₁ ⇒ Σ₂* extended homomorphically, or a
// structural recursion on whole terms.
struct SyntaxTranslation {
  enum class Kind : std::uint8_t { LayerMap, WholeTerm };
  Kind kind = Kind::LayerMap;
  // LayerMap: (source node, already-translated children) -> target term.
  std::function<Term(const Term& node, std::vector<Term> kids)> layer;
  // WholeTerm: closed source term -> target term.
  std::function<Term(const Term&)> whole;
};

// b : B₁ ⇒ B₂, split into its input side, its output side, and the inputs
// answered without consulting the source behavior.
struct BehaviorTranslation {
  std::function<std::optional<StepOutcome>(const MachineState& targetIn)> passThrough;
  std::function<MachineState(const MachineState& targetIn)> inputMap;
  // The source outcome's continuation has already been translated.
  std::function<StepOutcome(const MachineState& targetIn, const StepOutcome& sourceOut)> outputMap;
};

struct CompilerPair {
  std::string name;
  std::string source;
  std::string target;
  SyntaxTranslation syntax;
  BehaviorTranslation behavior;
  bool openCheckable() const { return syntax.kind == SyntaxTranslation::Kind::LayerMap; }
};

// Translates a (possibly open) source term; variables map to themselves.
// WholeTerm translations reject open terms.
Term compile(const CompilerPair& cp, const Term& p);

// The translation of a single layer over variables 0..arity-1.
Term translateLayer(const CompilerPair& cp, const Term& node);

// b applied to a source behavior at a target input. `compileCont` translates
// the source continuation.
StepOutcome translateBehavior(const CompilerPair& cp, const Behavior& source, const MachineState& targetIn,
                              const std::function<Term(const Term&)>& compileCont);

// Flattens While into Low: a loop becomes a guard branch, its body and a
// backward jump.
std::vector<Inst> flattenToLow(const Term& p);

// Source natural-number expressions read in the integer language
// (truncated subtraction becomes a - min(a, b)).
Expr natToIntExpr(const Expr& e);

// Source stack of a Stack state: blocks sp-1 down to 0, newest first.
FrameStack divideStore(const Store& s, Value sp, Cell frameLen);
// `override (join m) s` with m newest first.
Store overrideJoin(const FrameStack& m, const Store& s);

// Names: embed-flag, sandbox, unsandbox, embed-int, sandbox-int,
// flatten-low, embed-low-sec, embed-stack, embed-stack-clear.
std::vector<CompilerPair> makeCompilerRegistry(Cell frameLen = kDefaultFrameLen);
const CompilerPair& compiler(const std::string& name, Cell frameLen = kDefaultFrameLen);
std::vector<std::string> compilerNames();

}  // namespace gsos
