#pragma once

#include <string>
#include <vector>

#include "gsos/checker.hpp"
#include "json.hpp"

namespace gsos::cli {

using nlohmann::json;

json configToJson(const CampaignConfig& cfg);
CampaignConfig configFromJson(const json& j);

json outcomeToJson(const StepOutcome& o);
json bisimToJson(const BisimResult& b);
json counterexampleToJson(const CompilerPair& cp, const Counterexample& c);
json talliesToJson(const Verdict& v);

// Rebuilds the case a witness was found on.
CoherenceCase caseFromJson(const CompilerPair& cp, const CampaignConfig& cfg, const json& witness);

// Report skeleton with the versioned header fields.
json reportHeader(const std::vector<std::string>& command, const CampaignConfig& cfg);

// Human-readable lines.
std::vector<std::string> describeVerdict(const CompilerPair& cp, const Verdict& v);
std::vector<std::string> describeCounterexample(const Counterexample& c);
std::vector<std::string> describeBisim(const BisimResult& b);

}  // namespace gsos::cli
