#include "report.hpp"

#include <sstream>

#include "cli.hpp"
#include "gsos/error.hpp"
#include "gsos/syntax.hpp"

namespace gsos::cli {

json configToJson(const CampaignConfig& cfg) {
  return json{{"max_term_size", cfg.maxTermSize},
              {"max_expr_depth", cfg.maxExprDepth},
              {"term_expr_depth", cfg.termExprDepth},
              {"store_cells", cfg.storeCells},
              {"max_value", cfg.maxValue},
              {"pc_below", cfg.pcBelow},
              {"pc_above", cfg.pcAbove},
              {"sp_min", cfg.spMin},
              {"sp_max", cfg.spMax},
              {"frame_len", cfg.frameLen},
              {"depth", cfg.depth},
              {"samples", cfg.samples},
              {"table_samples", cfg.tableSamples},
              {"var_pool", cfg.varPool},
              {"law_inputs", cfg.lawInputs},
              {"seed", cfg.seed},
              {"mode", std::string(modeName(cfg.mode))},
              {"threads", cfg.threads}};
}

CampaignConfig configFromJson(const json& j) {
  CampaignConfig cfg;
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("max_term_size", cfg.maxTermSize);
  get("max_expr_depth", cfg.maxExprDepth);
  get("term_expr_depth", cfg.termExprDepth);
  get("store_cells", cfg.storeCells);
  get("max_value", cfg.maxValue);
  get("pc_below", cfg.pcBelow);
  get("pc_above", cfg.pcAbove);
  get("sp_min", cfg.spMin);
  get("sp_max", cfg.spMax);
  get("frame_len", cfg.frameLen);
  get("depth", cfg.depth);
  get("samples", cfg.samples);
  get("table_samples", cfg.tableSamples);
  get("var_pool", cfg.varPool);
  get("law_inputs", cfg.lawInputs);
  get("seed", cfg.seed);
  get("threads", cfg.threads);
  if (j.contains("mode")) cfg.mode = parseMode(j.at("mode").get<std::string>());
  return cfg;
}

json outcomeToJson(const StepOutcome& o) {
  json j{{"state", toString(o.state)}, {"terminated", o.terminated()}, {"pretty", pretty(o)}};
  j["label"] = o.label ? json(*o.label) : json(nullptr);
  j["continuation"] = o.continuation ? json(sexpr(*o.continuation)) : json(nullptr);
  if (o.totalized) j["totalized"] = true;
  return j;
}

json bisimToJson(const BisimResult& b) {
  json j{{"equivalent", b.equivalent}, {"depth", b.depth}, {"inputs", b.inputs}, {"pairs", b.pairs},
         {"totalized", b.totalized}};
  if (!b.equivalent) {
    json path = json::array();
    for (const auto& s : b.path) path.push_back(toString(s));
    j["path"] = path;
    json lt = json::array();
    json rt = json::array();
    for (const auto& t : b.leftTerms) lt.push_back(sexpr(t));
    for (const auto& t : b.rightTerms) rt.push_back(sexpr(t));
    j["left_terms"] = lt;
    j["right_terms"] = rt;
    if (b.left) j["left"] = outcomeToJson(*b.left);
    if (b.right) j["right"] = outcomeToJson(*b.right);
    j["divergence"] = std::string(divergenceName(b.divergence));
  }
  return j;
}

json counterexampleToJson(const CompilerPair& cp, const Counterexample& c) {
  json consulted = json::array();
  for (const auto& e : c.consulted)
    consulted.push_back({{"var", e.var}, {"input", toString(e.input)}, {"output", outcomeToJson(e.output)}});
  json j{{"compiler", cp.name},
         {"mode", std::string(modeName(c.kase.mode))},
         {"index", c.kase.index},
         {"table_sample", c.kase.tableSample},
         {"source", sexpr(c.kase.source)},
         {"source_pretty", pretty(c.kase.source)},
         {"input", toString(c.kase.input)},
         {"target", sexpr(c.target)},
         {"target_pretty", pretty(c.target)},
         {"upper", outcomeToJson(c.upper)},
         {"lower", outcomeToJson(c.lower)},
         {"divergence", std::string(divergenceName(c.divergence))},
         {"consulted", consulted}};
  if (c.continuationWitness) j["continuation_witness"] = bisimToJson(*c.continuationWitness);
  return j;
}

json talliesToJson(const Verdict& v) {
  return json{{"cases", v.cases},         {"inconclusive", v.inconclusive}, {"up_to_bisim", v.upToBisim},
              {"totalized", v.totalized}, {"skipped", v.skipped},           {"window_size", v.windowSize},
              {"sources", v.sources}};
}

CoherenceCase caseFromJson(const CompilerPair& cp, const CampaignConfig& cfg, const json& w) {
  const LangDef& tgt = language(cp.target, cfg.frameLen);
  CoherenceCase c;
  c.mode = parseMode(w.at("mode").get<std::string>());
  c.index = w.at("index").get<std::size_t>();
  c.tableSample = w.at("table_sample").get<std::size_t>();
  c.source = parseTerm(w.at("source").get<std::string>());
  c.input = parseState(w.at("input").get<std::string>(), tgt.inputKind);
  return c;
}

json reportHeader(const std::vector<std::string>& command, const CampaignConfig& cfg) {
  return json{{"format_version", kFormatVersion},
              {"tool_version", GSOS_VERSION},
              {"command", command},
              {"config", configToJson(cfg)}};
}

namespace {

std::string budgetLine(const CampaignConfig& c) {
  std::ostringstream o;
  o << "budget: mode " << modeName(c.mode) << ", term size " << c.maxTermSize << ", expr depth " << c.maxExprDepth
    << ", cells " << c.storeCells << ", values <= " << c.maxValue << ", pc [" << c.pcBelow << ", len+" << c.pcAbove
    << "], sp [" << c.spMin << ", " << c.spMax << "], L " << c.frameLen << ", depth " << c.depth << ", samples "
    << c.samples << ", table samples " << c.tableSamples << ", seed 0x" << std::hex << c.seed;
  return o.str();
}

}  // namespace

std::vector<std::string> describeCounterexample(const Counterexample& c) {
  std::vector<std::string> out;
  out.push_back("  case: #" + std::to_string(c.kase.index) + " (table sample " + std::to_string(c.kase.tableSample) + ")");
  out.push_back("  source: " + pretty(c.kase.source));
  out.push_back("  target: " + pretty(c.target));
  out.push_back("  input: " + toString(c.kase.input));
  out.push_back("  upper: " + pretty(c.upper));
  out.push_back("  lower: " + pretty(c.lower));
  out.push_back("  divergence: " + std::string(divergenceName(c.divergence)));
  for (const auto& e : c.consulted)
    out.push_back("  table ?x" + std::to_string(e.var) + " at " + toString(e.input) + " " + pretty(e.output));
  return out;
}

std::vector<std::string> describeVerdict(const CompilerPair& cp, const Verdict& v) {
  std::vector<std::string> out;
  out.push_back("compiler: " + cp.name + " (" + cp.source + " -> " + cp.target + ")");
  out.push_back(budgetLine(v.config));
  out.push_back(std::string("verdict: ") + (v.pass ? "PASS" : "FAIL"));
  std::ostringstream t;
  t << "cases: " << v.cases << ", inconclusive: " << v.inconclusive << ", up to bisimilarity: " << v.upToBisim
    << ", totalized: " << v.totalized << ", skipped: " << v.skipped << ", sources: " << v.sources
    << ", window: " << v.windowSize;
  out.push_back(t.str());
  if (v.pass && v.inconclusive > 0)
    out.push_back("warning: " + std::to_string(v.inconclusive) + " cases escaped their tables; pass is partial");
  if (v.counterexample) {
    out.push_back("witness:");
    for (auto& l : describeCounterexample(*v.counterexample)) out.push_back(std::move(l));
  }
  return out;
}

std::vector<std::string> describeBisim(const BisimResult& b) {
  std::vector<std::string> out;
  std::ostringstream h;
  h << (b.equivalent ? "Equivalent" : "Distinguished") << " (depth " << b.depth << ", " << b.inputs << " inputs, "
    << b.pairs << " pairs)";
  out.push_back(h.str());
  if (!b.equivalent) {
    for (std::size_t i = 0; i < b.path.size(); ++i) {
      std::string line = "  step " + std::to_string(i) + " at " + toString(b.path[i]);
      if (i < b.leftTerms.size()) line += ": " + pretty(b.leftTerms[i]) + "  vs  " + pretty(b.rightTerms[i]);
      out.push_back(line);
    }
    if (b.left) out.push_back("  left:  " + pretty(*b.left));
    if (b.right) out.push_back("  right: " + pretty(*b.right));
    out.push_back("  divergence: " + std::string(divergenceName(b.divergence)));
  }
  return out;
}

}  // namespace gsos::cli
