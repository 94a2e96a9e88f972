#include "demos.hpp"

#include "gsos/syntax.hpp"

namespace gsos::cli {

namespace {

using namespace build;

struct Check {
  std::string what;
  bool ok;
};

// Runs a campaign and records it in the demo result.
Verdict campaign(DemoResult& r, const std::string& name, const CampaignConfig& cfg, CampaignMode mode) {
  const CompilerPair& cp = compiler(name, cfg.frameLen);
  CampaignConfig c = cfg;
  c.mode = mode;
  Verdict v = checkCoherence(cp, c);
  for (auto& l : describeVerdict(cp, v)) r.lines.push_back(std::move(l));
  r.report["subject"] = {{"compiler", cp.name}};
  r.report["verdict"] = v.pass ? "pass" : "fail";
  r.report["witness"] = v.counterexample ? counterexampleToJson(cp, *v.counterexample) : json(nullptr);
  r.report["tallies"] = talliesToJson(v);
  r.report["config"] = configToJson(v.config);
  return v;
}

// Evaluates one pinned closed case.
CaseResult pinned(DemoResult& r, const std::string& name, const CampaignConfig& cfg, const Term& p, const MachineState& in) {
  const CompilerPair& cp = compiler(name, cfg.frameLen);
  CoherenceCase c;
  c.mode = CampaignMode::Closed;
  c.source = p;
  c.input = in;
  CaseResult res = evaluateCase(cp, cfg, c, true, true);
  r.lines.push_back("pinned " + name + ": " + pretty(p) + " at " + toString(in));
  json j{{"compiler", name}, {"source", sexpr(p)}, {"input", toString(in)}, {"ok", res.ok}};
  if (res.counterexample) {
    r.lines.push_back("  upper: " + pretty(res.counterexample->upper));
    r.lines.push_back("  lower: " + pretty(res.counterexample->lower));
    r.lines.push_back("  divergence: " + std::string(divergenceName(res.counterexample->divergence)));
    j["upper"] = outcomeToJson(res.counterexample->upper);
    j["lower"] = outcomeToJson(res.counterexample->lower);
    j["divergence"] = std::string(divergenceName(res.counterexample->divergence));
  } else {
    r.lines.push_back("  both paths agree");
  }
  r.report["pinned"].push_back(j);
  return res;
}

void finish(DemoResult& r, const std::vector<Check>& checks) {
  r.reproduced = true;
  for (const auto& c : checks) {
    r.lines.push_back(std::string(c.ok ? "  ok   " : "  FAIL ") + c.what);
    r.report["checks"].push_back({{"check", c.what}, {"ok", c.ok}});
    r.reproduced = r.reproduced && c.ok;
  }
  r.report["reproduced"] = r.reproduced;
}

const Counterexample* cex(const Verdict& v) { return v.counterexample ? &*v.counterexample : nullptr; }

DemoResult embedFlagDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "embed-flag", cfg, CampaignMode::Open);
  const Counterexample* c = cex(v);
  finish(r, {{"coherence fails", !v.pass},
             {"divergence is the label", c && c->divergence == Divergence::Label},
             {"witness is an assignment layer", c && !c->kase.source.isVar() && c->kase.source.ctor() == Ctor::Assign},
             {"upper label 0, lower label v != 0", c && c->upper.label == 0 && c->lower.label && *c->lower.label != 0},
             {"found within 10^4 cases", v.cases <= 10000}});
  return r;
}

DemoResult sandboxDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "sandbox", cfg, CampaignMode::Open);
  finish(r, {{"coherence passes", v.pass}, {"no inconclusive cases", v.inconclusive == 0}, {"cases evaluated", v.cases > 0}});
  return r;
}

DemoResult unsandboxDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "unsandbox", cfg, CampaignMode::Open);
  const Counterexample* c = cex(v);
  finish(r, {{"coherence fails", !v.pass},
             {"witness is a sandboxed layer", c && !c->kase.source.isVar() && c->kase.source.ctor() == Ctor::Sandbox},
             {"inner label v != 0 leaks", c && c->divergence == Divergence::Label && c->upper.label == 0 && c->lower.label &&
                                             *c->lower.label != 0}});
  return r;
}

Term minProgram() { return assign(0, Expr::bin(BinOp::Min, Expr::var(0), Expr::lit(0))); }

DemoResult embedIntDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "embed-int", cfg, CampaignMode::Open);
  const Counterexample* c = cex(v);
  CaseResult p = pinned(r, "embed-int", cfg, minProgram(), Store{{0, -1}});
  const Counterexample* pc = p.counterexample ? &*p.counterexample : nullptr;
  finish(r, {{"coherence fails", !v.pass},
             {"witness input has a negative cell", c && c->kase.input.store().hasNegative()},
             {"pinned case diverges on the state", pc && pc->divergence == Divergence::State},
             {"pinned lower writes -1", pc && pc->lower.state.store().get(0) == -1},
             {"pinned upper writes 0", pc && pc->upper.state.store().get(0) == 0}});
  return r;
}

DemoResult sandboxIntDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "sandbox-int", cfg, CampaignMode::Open);
  CaseResult p = pinned(r, "sandbox-int", cfg, minProgram(), Store{{0, -1}});
  finish(r, {{"coherence passes", v.pass}, {"no inconclusive cases", v.inconclusive == 0}, {"pinned case agrees", p.ok}});
  return r;
}

Term deadLoop() { return loopWhile(Expr::lit(0), assign(0, Expr::lit(0))); }

DemoResult flattenLowDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "flatten-low", cfg, CampaignMode::Closed);
  Store s{{0, 1}};
  CaseResult p = pinned(r, "flatten-low", cfg, deadLoop(), PcState{s, 1});
  const Counterexample* pc = p.counterexample ? &*p.counterexample : nullptr;
  finish(r, {{"closed coherence fails", !v.pass},
             {"pinned upper is (s, 1) terminated",
              pc && pc->upper.terminated() && pc->upper.state == MachineState(PcState{s, 1})},
             {"pinned lower is (s[0:=0], 2) running",
              pc && !pc->lower.terminated() && pc->lower.state == MachineState(PcState{s.with(0, 0), 2})}});
  return r;
}

DemoResult embedLowSecDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "embed-low-sec", cfg, CampaignMode::Open);
  Store s{{0, 1}};
  CaseResult p = pinned(r, "embed-low-sec", cfg, deadLoop(), PcState{s, 1});
  bool outOfRange = v.config.pcBelow < 0 && v.config.pcAbove > 0;
  finish(r, {{"coherence passes", v.pass},
             {"no inconclusive cases", v.inconclusive == 0},
             {"window includes out-of-range pcs", outOfRange},
             {"pinned while loop at pc 1 agrees", p.ok}});
  return r;
}

DemoResult embedStackDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "embed-stack", cfg, CampaignMode::Open);
  const Counterexample* c = cex(v);
  CaseResult p = pinned(r, "embed-stack", cfg, frame(), SpState{Store{{0, 1}}, 0});
  bool shape = false;
  if (c && c->kase.input.kind() == StateKind::Sp) {
    const SpState& in = c->kase.input.spState();
    FrameStack zero;
    zero.frames.push_back(Frame(cfg.frameLen, 0));
    Store expected = overrideJoin(zero, in.store);
    shape = in.sp == 0 && !(expected == in.store) && c->upper.state.spState().store == expected &&
            c->lower.state.spState().store == in.store;
  }
  finish(r, {{"coherence fails", !v.pass},
             {"divergence is the state", c && c->divergence == Divergence::State},
             {"witness is frame at sp 0", c && !c->kase.source.isVar() && c->kase.source.ctor() == Ctor::Frame},
             {"upper s0 ++ drop L s, lower s", shape},
             {"pinned frame at ({0:1}, 0) diverges", !p.ok}});
  return r;
}

DemoResult embedStackClearDemo(const CampaignConfig& cfg) {
  DemoResult r;
  Verdict v = campaign(r, "embed-stack-clear", cfg, CampaignMode::Open);
  CaseResult p = pinned(r, "embed-stack-clear", cfg, frame(), SpState{Store{{0, 1}}, 0});
  finish(r, {{"coherence passes", v.pass}, {"no inconclusive cases", v.inconclusive == 0}, {"pinned frame agrees", p.ok}});
  return r;
}

DemoResult countingLoopDemo(const CampaignConfig& cfg) {
  DemoResult r;
  const CompilerPair& cp = compiler("flatten-low", cfg.frameLen);
  Term src = loopWhile(Expr::bin(BinOp::Lt, Expr::var(0), Expr::lit(2)), assign(1, Expr::bin(BinOp::Add, Expr::var(1), Expr::lit(1))));
  Term tgt = compile(cp, src);
  std::string text = pretty(tgt);
  const std::string expected = "br !(var 0 < 2) 3 ;; assign 1 (var 1 + 1) ;; br (lit 1) -2";
  r.lines.push_back("source: " + pretty(src));
  r.lines.push_back("target: " + text);
  RunResult run = gsos::run(language("low", cfg.frameLen), tgt, PcState{Store{{0, 5}}, 0}, 100);
  r.lines.push_back("run at ({0:5}, 0): " + std::string(run.terminated ? "terminated at " : "fuel exhausted at ") +
                    toString(run.state));
  r.report["subject"] = {{"compiler", cp.name}};
  r.report["verdict"] = text == expected ? "pass" : "fail";
  r.report["compiled"] = text;
  finish(r, {{"printed program matches", text == expected},
             {"runs off the end at ({0:5}, 0)", run.terminated && run.state.pcState().pc >= 3}});
  return r;
}

DemoResult flagContextDemo(const CampaignConfig& cfg) {
  DemoResult r;
  const LangDef& lang = language("while-flag", cfg.frameLen);
  Term zero = assign(0, Expr::lit(0));
  Term a = loopWhile(Expr::var(0), zero);
  Term b = loopWhile(Expr::bin(BinOp::Mul, Expr::var(0), Expr::lit(2)), zero);
  Context ctx = separatingContext();
  Term ca = plug(lang.signature, ctx, a);
  Term cb = plug(lang.signature, ctx, b);
  Store s{{0, 1}};
  constexpr std::size_t kFuel = 10000;
  RunResult ra = run(lang, ca, s, kFuel);
  RunResult rb = run(lang, cb, s, kFuel);
  r.lines.push_back("context: " + pretty(ctx, lang.signature));
  auto show = [](const RunResult& x) {
    return x.terminated ? "terminates in " + std::to_string(x.trace.size()) + " steps at " + toString(x.state)
                        : "fuel exhausted after " + std::to_string(x.trace.size()) + " steps";
  };
  r.lines.push_back("c[a] = " + pretty(ca) + ": " + show(ra));
  r.lines.push_back("c[b] = " + pretty(cb) + ": " + show(rb));
  r.report["subject"] = {{"language", lang.name}};
  r.report["context"] = pretty(ctx, lang.signature);
  r.report["runs"] = {{{"term", sexpr(ca)}, {"terminated", ra.terminated}, {"steps", ra.trace.size()}},
                      {{"term", sexpr(cb)}, {"terminated", rb.terminated}, {"steps", rb.trace.size()}}};
  r.report["verdict"] = ra.terminated != rb.terminated ? "fail" : "pass";
  finish(r, {{"c[a] terminates", ra.terminated}, {"c[b] exhausts fuel", !rb.terminated}});
  return r;
}

}  // namespace

Context separatingContext() {
  Term guard = loopWhile(Expr::bin(BinOp::Sub, Expr::var(1), Expr::lit(1)), skip());
  OneHoleLayer seqLayer{"while-flag", Ctor::Seq, 0, {guard}, {}};
  OneHoleLayer obsLayer{"while-flag", Ctor::Obs, 0, {}, {Payload(Cell{1})}};
  return {seqLayer, obsLayer};
}

const std::vector<Demo>& demos() {
  static const std::vector<Demo> all{
      {"fig3", "embed-flag breaks coherence on an assignment", embedFlagDemo},
      {"fig4", "sandbox restores coherence", sandboxDemo},
      {"fig5", "unsandbox leaks an inner label", unsandboxDemo},
      {"fig6", "flatten-low is not a coalgebra homomorphism", flattenLowDemo},
      {"fig8", "embed-low-sec is coherent, out-of-range pcs included", embedLowSecDemo},
      {"fig9", "embed-stack leaks the caller's frame", embedStackDemo},
      {"fig10", "embed-stack-clear is coherent", embedStackClearDemo},
      {"sec6-fail", "embed-int breaks on negative stores", embedIntDemo},
      {"sec6-pass", "sandbox-int is coherent", sandboxIntDemo},
      {"example1", "flatten-low on a counting loop", countingLoopDemo},
      {"sec3-context", "a While-flag context separates a and b", flagContextDemo},
  };
  return all;
}

const Demo* findDemo(const std::string& name) {
  for (const auto& d : demos())
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace gsos::cli
