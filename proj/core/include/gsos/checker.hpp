#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gsos/compilers.hpp"
#include "gsos/generate.hpp"

namespace gsos {

enum class CampaignMode : std::uint8_t { Open, Closed };
std::string_view modeName(CampaignMode m);
CampaignMode parseMode(std::string_view s);

constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct CampaignConfig {
  std::size_t maxTermSize = 4;
  std::size_t maxExprDepth = 2;   // payload expressions of open layers
  std::size_t termExprDepth = 1;  // payload expressions of enumerated closed terms
  Cell storeCells = 2;
  Value maxValue = 3;
  Value pcBelow = -1;  // pc window is [pcBelow, len + pcAbove]
  Value pcAbove = 1;
  Value spMin = 0;
  Value spMax = 3;
  Cell frameLen = kDefaultFrameLen;
  std::size_t depth = 20;
  std::size_t samples = 1000;      // cap on window inputs (and sampled terms/contexts)
  std::size_t tableSamples = 4;    // behavior tables drawn per layer with children
  VarId varPool = 4;               // variables a table continuation may name
  std::size_t lawInputs = 64;      // inputs per term in the law suite
  std::uint64_t seed = kDefaultSeed;
  CampaignMode mode = CampaignMode::Open;
  unsigned threads = 1;

  friend bool operator==(const CampaignConfig&, const CampaignConfig&) = default;
};

// Defaults, with the seed taken from GSOS_SEED when set.
CampaignConfig defaultConfig();

GenBounds layerBounds(const LangDef& lang, const CampaignConfig& cfg);
GenBounds termBounds(const LangDef& lang, const CampaignConfig& cfg);

// Input states of a language. `programLen` widens the pc window of Low.
// When the full window exceeds cfg.samples it is sampled deterministically,
// always keeping the all-zero and unit stores.
std::vector<MachineState> inputWindow(const LangDef& lang, const CampaignConfig& cfg, std::size_t programLen = 1);

// Deterministic behavior tables for variables 0..varPool-1 of `lang`,
// sample j. Outputs stay inside the language's window.
std::shared_ptr<const std::map<VarId, BehaviorTable>> sampleTables(const LangDef& lang, const CampaignConfig& cfg,
                                                                   std::size_t j);

struct TableEntry {
  VarId var;
  MachineState input;
  StepOutcome output;
};

// One element of the case stream.
struct CoherenceCase {
  CampaignMode mode = CampaignMode::Open;
  std::size_t index = 0;
  Term source = Term::var(0);  // layer over variables (open) or closed term
  MachineState input;        // target input
  std::size_t tableSample = 0;
};

class CaseStream {
 public:
  CaseStream(const CompilerPair& cp, const CampaignConfig& cfg);
  std::size_t size() const { return total_; }
  CoherenceCase at(std::size_t index) const;
  const std::vector<Term>& sources() const { return sources_; }

 private:
  const CompilerPair* cp_;
  CampaignConfig cfg_;
  std::vector<Term> sources_;
  std::vector<std::vector<MachineState>> windows_;  // per distinct program length
  std::vector<std::size_t> windowOf_;               // source -> windows_ index
  std::vector<std::size_t> perSample_;              // table samples per source
  std::vector<std::size_t> offsets_;                // first case index per source
  std::size_t total_ = 0;
};

struct Counterexample {
  CoherenceCase kase;
  Term target = Term::var(0);     // translated layer / compiled term
  StepOutcome upper;              // b ∘ Bσ* ∘ ρ₁*
  StepOutcome lower;              // ρ₂* ∘ σ*
  Divergence divergence = Divergence::None;
  std::vector<TableEntry> consulted;  // table entries read by either path
  std::optional<BisimResult> continuationWitness;

  friend bool operator==(const Counterexample& a, const Counterexample& b) {
    return a.kase.index == b.kase.index && a.target == b.target && a.upper == b.upper && a.lower == b.lower &&
           a.divergence == b.divergence;
  }
};

struct Verdict {
  bool pass = true;
  std::string compiler;
  CampaignConfig config;
  std::size_t cases = 0;         // cases evaluated
  std::size_t inconclusive = 0;  // cases that escaped their tables even after widening
  std::size_t upToBisim = 0;     // continuations matched only up to bounded bisimilarity
  std::size_t totalized = 0;     // cases that exercised a totalizing convention
  std::size_t skipped = 0;       // ill-formed cases (closed mode)
  std::size_t windowSize = 0;    // largest input window used
  std::size_t sources = 0;       // layers or closed terms enumerated
  std::optional<Counterexample> counterexample;
};

// Evaluates one case. Returns the counterexample if the paths diverge.
// Throws IncompleteTable when a table is consulted outside its domain.
struct CaseResult {
  bool ok = true;
  bool upToBisim = false;
  bool totalized = false;
  std::optional<Counterexample> counterexample;
};
CaseResult evaluateCase(const CompilerPair& cp, const CampaignConfig& cfg, const CoherenceCase& c, bool widen = false,
                        bool record = false);

Verdict checkCoherenceOpen(const CompilerPair& cp, const CampaignConfig& cfg);
Verdict checkCoherenceClosed(const CompilerPair& cp, const CampaignConfig& cfg);
Verdict checkCoherence(const CompilerPair& cp, const CampaignConfig& cfg);

// Re-evaluates a counterexample's case; the result must equal the original.
std::optional<Counterexample> replay(const CompilerPair& cp, const CampaignConfig& cfg, const CoherenceCase& c);

struct PreservationViolation {
  Term left;
  Term right;
  BisimResult source;  // Equivalent
  Term leftTarget;
  Term rightTarget;
  BisimResult target;  // Distinguished
};

struct PreservationReport {
  std::string compiler;
  std::size_t pairs = 0;
  std::size_t sourceEquivalent = 0;
  std::size_t preserved = 0;
  std::size_t skipped = 0;
  std::vector<PreservationViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Pairs that are known bisimilar in the source language.
std::vector<std::pair<Term, Term>> curatedPairs(const std::string& sourceLanguage);

// Checks bisimilarity preservation on the given pairs, or on the curated
// pairs plus sampled pairs when `pairs` is empty.
PreservationReport checkPreservation(const CompilerPair& cp, const CampaignConfig& cfg,
                                     std::vector<std::pair<Term, Term>> pairs = {});

struct ContextReport {
  std::string language;
  BisimResult base;
  std::size_t contexts = 0;
  std::size_t closed = 0;
  std::optional<Context> violation;
  std::optional<BisimResult> violationWitness;
  bool ok() const { return base.equivalent && !violation; }
};

ContextReport checkContextClosure(const LangDef& lang, const Term& p, const Term& q, const CampaignConfig& cfg,
                                  std::size_t maxLayers = 3);

struct LawCheck {
  std::string law;  // unit, copoint, multiplication
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string firstFailure;
};

struct LawReport {
  std::string language;
  std::vector<LawCheck> checks;
  std::size_t terms = 0;
  bool ok() const;
};

LawReport checkLaws(const LangDef& lang, const CampaignConfig& cfg);

struct RoundTripReport {
  std::string language;
  std::size_t terms = 0;
  std::size_t decompositions = 0;
  std::size_t failures = 0;
  std::string firstFailure;
  bool ok() const { return failures == 0 && terms > 0; }
};

// plug(c, t') == t for every decomposition (c, t') of every enumerated term
// of size <= maxSize (over a one-cell, 0/1 payload alphabet), through both
// single- and multi-hole contexts.
RoundTripReport checkPlugRoundTrip(const LangDef& lang, const CampaignConfig& cfg, std::size_t maxSize = 4);

}  // namespace gsos
