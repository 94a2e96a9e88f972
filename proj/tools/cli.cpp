#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "demos.hpp"
#include "gsos/error.hpp"
#include "gsos/syntax.hpp"
#include "report.hpp"

namespace gsos::cli {

namespace {

struct Budget {
  CampaignConfig cfg = defaultConfig();
  std::string seed;
  std::string mode;

  void add(CLI::App* app) {
    app->add_option("--max-term-size", cfg.maxTermSize, "closed-term size bound")->capture_default_str();
    app->add_option("--max-expr-depth", cfg.maxExprDepth, "expression depth in open layers")->capture_default_str();
    app->add_option("--term-expr-depth", cfg.termExprDepth, "expression depth in closed terms")->capture_default_str();
    app->add_option("--store-cells", cfg.storeCells, "store cells in the window")->capture_default_str();
    app->add_option("--max-value", cfg.maxValue, "largest store value")->capture_default_str();
    app->add_option("--pc-below", cfg.pcBelow, "lowest pc")->capture_default_str();
    app->add_option("--pc-above", cfg.pcAbove, "pcs past the program end")->capture_default_str();
    app->add_option("--sp-min", cfg.spMin, "lowest stack pointer")->capture_default_str();
    app->add_option("--sp-max", cfg.spMax, "highest stack pointer")->capture_default_str();
    app->add_option("--frame-len", cfg.frameLen, "frame length L")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--depth", cfg.depth, "bisimulation depth")->capture_default_str();
    app->add_option("--samples", cfg.samples, "window and sampling cap")->capture_default_str();
    app->add_option("--table-samples", cfg.tableSamples, "behavior tables per layer")->capture_default_str();
    app->add_option("--law-inputs", cfg.lawInputs, "inputs per term in the law suite")->capture_default_str();
    app->add_option("--seed", seed, "seed (decimal or 0x hex; default from GSOS_SEED)");
    app->add_option("--threads", cfg.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  }

  void addMode(CLI::App* app) { app->add_option("--mode", mode, "open or closed")->check(CLI::IsMember({"open", "closed"})); }

  CampaignConfig resolve() const {
    CampaignConfig c = cfg;
    if (!seed.empty()) {
      std::size_t pos = 0;
      c.seed = std::stoull(seed, &pos, 0);
      if (pos != seed.size()) throw ParseError("bad seed: " + seed);
    }
    if (!mode.empty()) c.mode = parseMode(mode);
    return c;
  }
};

using Clock = std::chrono::steady_clock;

long long elapsedMs(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

void printLines(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << l << '\n';
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Splits "A B" where A is a complete s-expression or atom.
std::pair<std::string, std::string> splitPair(const std::string& line) {
  std::size_t i = line.find_first_not_of(" \t");
  if (i == std::string::npos) throw ParseError("empty pair line");
  std::size_t j = i;
  if (line[i] == '(') {
    int open = 0;
    for (; j < line.size(); ++j) {
      if (line[j] == '(') ++open;
      if (line[j] == ')' && --open == 0) break;
    }
    if (j == line.size()) throw ParseError("unbalanced pair line: " + line);
    ++j;
  } else {
    j = line.find_first_of(" \t", i);
    if (j == std::string::npos) throw ParseError("pair line needs two terms: " + line);
  }
  return {line.substr(i, j - i), line.substr(j)};
}

std::vector<std::pair<Term, Term>> readPairs(const std::string& path, const LangDef& lang) {
  std::vector<std::pair<Term, Term>> pairs;
  std::istringstream in(readFile(path));
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto [l, r] = splitPair(line);
    pairs.emplace_back(parseTerm(l, lang), parseTerm(r, lang));
  }
  return pairs;
}

std::string transition(const MachineState& in, const Term& t, const StepOutcome& o) {
  std::string s = "⟨" + toString(in) + ", " + pretty(t) + "⟩ ";
  if (o.terminated())
    s += "⇓ " + toString(o.state);
  else
    s += "→ ⟨" + toString(o.state) + ", " + pretty(*o.continuation) + "⟩";
  if (o.label) s += " [" + std::to_string(*o.label) + "]";
  return s;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Executable GSOS semantics and coherence checking for compilers", "gsos"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GSOS_VERSION);

  bool json_ = false;
  Budget budget;
  std::string lang, termText, inputText, compilerName, left, right, pairsFile, demoName, reportFile;
  std::size_t fuel = 1000;
  std::size_t layers = 3;
  bool trace = false;
  bool sexprOut = false;

  auto* runCmd = app.add_subcommand("run", "run a closed program");
  runCmd->add_option("--lang", lang, "language")->required();
  runCmd->add_option("--term", termText, "program s-expression")->required();
  runCmd->add_option("--input", inputText, "initial state")->required();
  runCmd->add_option("--fuel", fuel, "step bound")->capture_default_str();
  runCmd->add_flag("--trace", trace, "print every transition");
  runCmd->add_option("--frame-len", budget.cfg.frameLen, "frame length L")->capture_default_str();

  auto* compileCmd = app.add_subcommand("compile", "translate a term");
  compileCmd->add_option("--compiler", compilerName, "compiler")->required();
  compileCmd->add_option("--term", termText, "source s-expression")->required();
  compileCmd->add_flag("--sexpr", sexprOut, "print the s-expression form");
  compileCmd->add_option("--frame-len", budget.cfg.frameLen, "frame length L")->capture_default_str();

  auto* cohCmd = app.add_subcommand("coherence", "check the coherence criterion");
  cohCmd->add_option("--compiler", compilerName, "compiler")->required();
  budget.addMode(cohCmd);
  budget.add(cohCmd);
  cohCmd->add_flag("--json", json_, "JSON report");

  auto* bisimCmd = app.add_subcommand("bisim", "bounded bisimilarity of two programs");
  bisimCmd->add_option("--lang", lang, "language")->required();
  bisimCmd->add_option("--left", left, "left program")->required();
  bisimCmd->add_option("--right", right, "right program")->required();
  budget.add(bisimCmd);
  bisimCmd->add_flag("--json", json_, "JSON report");

  auto* ctxCmd = app.add_subcommand("ctx-closure", "check bisimilarity under sampled contexts");
  ctxCmd->add_option("--lang", lang, "language")->required();
  ctxCmd->add_option("--left", left, "left program")->required();
  ctxCmd->add_option("--right", right, "right program")->required();
  ctxCmd->add_option("--layers", layers, "context depth")->capture_default_str();
  budget.add(ctxCmd);
  ctxCmd->add_flag("--json", json_, "JSON report");

  auto* presCmd = app.add_subcommand("preserve", "check bisimilarity preservation");
  presCmd->add_option("--compiler", compilerName, "compiler")->required();
  presCmd->add_option("--pairs", pairsFile, "file of source pairs, one pair per line");
  budget.add(presCmd);
  presCmd->add_flag("--json", json_, "JSON report");

  auto* lawsCmd = app.add_subcommand("laws", "distributive-law axioms and plug round trip");
  lawsCmd->add_option("--lang", lang, "language, or all")->default_val("all");
  budget.add(lawsCmd);
  lawsCmd->add_flag("--json", json_, "JSON report");

  std::vector<std::string> demoNames;
  for (const auto& d : demos()) demoNames.push_back(d.name);
  auto* demoCmd = app.add_subcommand("demo", "run a pinned reproduction");
  demoCmd->add_option("name", demoName, "demo name")->required()->check(CLI::IsMember(demoNames));
  budget.add(demoCmd);
  demoCmd->add_flag("--json", json_, "JSON report");

  auto* replayCmd = app.add_subcommand("replay", "re-run a JSON report");
  replayCmd->add_option("--report", reportFile, "report file")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << GSOS_VERSION << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  auto t0 = Clock::now();
  try {
    CampaignConfig cfg = budget.resolve();
    json report = reportHeader(args, cfg);
    auto emit = [&](json& r) {
      r["wall_time_ms"] = elapsedMs(t0);
      out << r.dump(2) << '\n';
    };

    if (*runCmd) {
      const LangDef& L = language(lang, cfg.frameLen);
      Term p = parseTerm(termText, L);
      MachineState in = parseState(inputText, L.inputKind);
      RunResult r = run(L, p, in, fuel);
      MachineState cur = in;
      Term t = p;
      for (const auto& o : r.trace) {
        if (trace) out << transition(cur, t, o) << '\n';
        cur = o.state;
        if (o.continuation) t = *o.continuation;
      }
      if (r.terminated)
        out << "terminated after " << r.trace.size() << " steps: " << toString(r.state) << '\n';
      else
        out << "fuel exhausted after " << r.trace.size() << " steps: ⟨" << toString(r.state) << ", "
            << pretty(*r.residual) << "⟩\n";
      if (r.totalized > 0) out << "totalized steps: " << r.totalized << '\n';
      return kPass;
    }

    if (*compileCmd) {
      const CompilerPair& cp = compiler(compilerName, cfg.frameLen);
      const LangDef& src = language(cp.source, cfg.frameLen);
      Term p = parseTerm(termText, src);
      Term q = compile(cp, p);
      out << (sexprOut ? sexpr(q) : pretty(q)) << '\n';
      return kPass;
    }

    if (*cohCmd) {
      const CompilerPair& cp = compiler(compilerName, cfg.frameLen);
      if (budget.mode.empty() && !cp.openCheckable()) cfg.mode = CampaignMode::Closed;
      if (cfg.mode == CampaignMode::Open && !cp.openCheckable()) {
        err << "error: " << cp.name << " translates whole programs; use --mode closed\n";
        return kUsage;
      }
      Verdict v = checkCoherence(cp, cfg);
      if (json_) {
        report["config"] = configToJson(v.config);
        report["subject"] = {{"compiler", cp.name}};
        report["verdict"] = v.pass ? "pass" : "fail";
        report["witness"] = v.counterexample ? counterexampleToJson(cp, *v.counterexample) : json(nullptr);
        report["tallies"] = talliesToJson(v);
        emit(report);
      } else {
        printLines(out, describeVerdict(cp, v));
        out << "time: " << elapsedMs(t0) << " ms\n";
      }
      return v.pass ? kPass : kFail;
    }

    if (*bisimCmd) {
      const LangDef& L = language(lang, cfg.frameLen);
      Term p = parseTerm(left, L);
      Term q = parseTerm(right, L);
      std::size_t len = L.inputKind == StateKind::Pc ? std::max(programLength(p), programLength(q)) : 1;
      BisimResult b = checkBisim(L, p, q, inputWindow(L, cfg, len), cfg.depth);
      if (json_) {
        report["subject"] = {{"language", L.name}, {"left", sexpr(p)}, {"right", sexpr(q)}};
        report["verdict"] = b.equivalent ? "equivalent" : "distinguished";
        report["witness"] = bisimToJson(b);
        emit(report);
      } else {
        printLines(out, describeBisim(b));
      }
      return b.equivalent ? kPass : kFail;
    }

    if (*ctxCmd) {
      const LangDef& L = language(lang, cfg.frameLen);
      Term p = parseTerm(left, L);
      Term q = parseTerm(right, L);
      ContextReport r = checkContextClosure(L, p, q, cfg, layers);
      if (json_) {
        report["subject"] = {{"language", L.name}, {"left", sexpr(p)}, {"right", sexpr(q)}};
        report["verdict"] = !r.base.equivalent ? "not-equivalent" : r.violation ? "violation" : "closed";
        report["tallies"] = {{"contexts", r.contexts}, {"closed", r.closed}};
        report["witness"] = r.violation ? json{{"context", pretty(*r.violation, L.signature)},
                                               {"bisim", bisimToJson(*r.violationWitness)}}
                                        : json(nullptr);
        report["base"] = bisimToJson(r.base);
        emit(report);
      } else {
        out << "base pair: ";
        printLines(out, describeBisim(r.base));
        out << "contexts: " << r.contexts << ", closed: " << r.closed << '\n';
        if (r.violation) {
          out << "violation: " << pretty(*r.violation, L.signature) << '\n';
          printLines(out, describeBisim(*r.violationWitness));
        }
        out << "verdict: " << (r.ok() ? "CLOSED" : "VIOLATION") << '\n';
      }
      return r.ok() ? kPass : kFail;
    }

    if (*presCmd) {
      const CompilerPair& cp = compiler(compilerName, cfg.frameLen);
      std::vector<std::pair<Term, Term>> pairs;
      if (!pairsFile.empty()) pairs = readPairs(pairsFile, language(cp.source, cfg.frameLen));
      PreservationReport r = checkPreservation(cp, cfg, pairs);
      if (json_) {
        report["subject"] = {{"compiler", cp.name}};
        report["verdict"] = r.ok() ? "preserved" : "violation";
        report["tallies"] = {{"pairs", r.pairs},
                             {"source_equivalent", r.sourceEquivalent},
                             {"preserved", r.preserved},
                             {"skipped", r.skipped},
                             {"violations", r.violations.size()}};
        json vs = json::array();
        for (const auto& v : r.violations)
          vs.push_back({{"left", sexpr(v.left)},
                        {"right", sexpr(v.right)},
                        {"left_target", sexpr(v.leftTarget)},
                        {"right_target", sexpr(v.rightTarget)},
                        {"source", bisimToJson(v.source)},
                        {"target", bisimToJson(v.target)}});
        report["witness"] = vs;
        emit(report);
      } else {
        out << "compiler: " << cp.name << " (" << cp.source << " -> " << cp.target << ")\n";
        out << "pairs: " << r.pairs << ", source equivalent: " << r.sourceEquivalent << ", preserved: " << r.preserved
            << ", skipped: " << r.skipped << ", violations: " << r.violations.size() << '\n';
        for (const auto& v : r.violations) {
          out << "violation: " << pretty(v.left) << "  ~  " << pretty(v.right) << '\n';
          out << "  source: ";
          printLines(out, describeBisim(v.source));
          out << "  target: " << pretty(v.leftTarget) << "  vs  " << pretty(v.rightTarget) << '\n';
          printLines(out, describeBisim(v.target));
        }
        out << "verdict: " << (r.ok() ? "PRESERVED" : "VIOLATION") << '\n';
      }
      return r.ok() ? kPass : kFail;
    }

    if (*lawsCmd) {
      std::vector<std::string> names = lang == "all" ? languageNames() : std::vector<std::string>{lang};
      bool ok = true;
      json results = json::array();
      for (const auto& n : names) {
        const LangDef& L = language(n, cfg.frameLen);
        LawReport lr = checkLaws(L, cfg);
        RoundTripReport rt = checkPlugRoundTrip(L, cfg, 4);
        ok = ok && lr.ok() && rt.ok();
        json entry{{"language", n}, {"terms", lr.terms}};
        if (!json_) out << n << " (" << lr.terms << " terms)\n";
        for (const auto& c : lr.checks) {
          entry["laws"].push_back({{"law", c.law}, {"checks", c.checks}, {"failures", c.failures}, {"first_failure", c.firstFailure}});
          if (!json_) {
            out << "  " << c.law << ": " << c.checks << " checks, " << c.failures << " failures";
            if (!c.firstFailure.empty()) out << " (first: " << c.firstFailure << ")";
            out << '\n';
          }
        }
        entry["plug_round_trip"] = {{"terms", rt.terms}, {"decompositions", rt.decompositions}, {"failures", rt.failures}};
        if (!json_)
          out << "  plug round trip: " << rt.terms << " terms, " << rt.decompositions << " decompositions, " << rt.failures
              << " failures\n";
        results.push_back(entry);
      }
      if (json_) {
        report["subject"] = {{"languages", names}};
        report["verdict"] = ok ? "pass" : "fail";
        report["witness"] = results;
        emit(report);
      } else {
        out << "verdict: " << (ok ? "PASS" : "FAIL") << '\n';
      }
      return ok ? kPass : kFail;
    }

    if (*demoCmd) {
      const Demo* d = findDemo(demoName);
      DemoResult r = d->run(cfg);
      if (json_) {
        for (auto& [k, v] : r.report.items()) report[k] = v;
        report["demo"] = d->name;
        emit(report);
      } else {
        out << "demo " << d->name << ": " << d->summary << '\n';
        printLines(out, r.lines);
        out << (r.reproduced ? "reproduced" : "NOT reproduced") << " (" << elapsedMs(t0) << " ms)\n";
      }
      return r.reproduced ? kPass : kFail;
    }

    if (*replayCmd) {
      json old = json::parse(readFile(reportFile));
      if (!old.contains("format_version") || old["format_version"] != kFormatVersion)
        throw ParseError("unsupported report format");
      if (!old.contains("subject") || !old["subject"].contains("compiler") || !old.contains("witness"))
        throw ParseError("report has no coherence verdict to replay");
      CampaignConfig rc = configFromJson(old.at("config"));
      const CompilerPair& cp = compiler(old["subject"]["compiler"].get<std::string>(), rc.frameLen);
      const json& w = old["witness"];
      if (!w.is_null() && w.is_object() && w.contains("source")) {
        CoherenceCase c = caseFromJson(cp, rc, w);
        std::optional<Counterexample> again = replay(cp, rc, c);
        bool same = again && counterexampleToJson(cp, *again) == w;
        if (again) printLines(out, describeCounterexample(*again));
        out << (same ? "reproduced: identical witness" : "mismatch: witness differs") << '\n';
        return same ? kPass : kFail;
      }
      Verdict v = checkCoherence(cp, rc);
      bool same = !v.counterexample && (v.pass ? "pass" : "fail") == old.value("verdict", std::string()) &&
                  talliesToJson(v) == old.value("tallies", json());
      printLines(out, describeVerdict(cp, v));
      out << (same ? "reproduced: identical verdict" : "mismatch: verdict differs") << '\n';
      return same ? kPass : kFail;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IllFormed& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const LanguageMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnknownName& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gsos::cli
