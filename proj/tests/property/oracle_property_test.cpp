#include <gtest/gtest.h>

#include "gsos/checker.hpp"
#include "gsos/syntax.hpp"
#include "oracles.hpp"

namespace gsos {
namespace {

std::uint64_t nameSeed(const std::string& name) {
  std::uint64_t h = 0x9E37;
  for (char c : name) h = hashCombine(h, static_cast<unsigned char>(c));
  return h;
}

std::vector<Store> stores(Value lo, Value hi) {
  std::vector<Store> out;
  for (Value a = lo; a <= hi; ++a)
    for (Value b = lo; b <= hi; ++b) out.push_back(Store{{0, a}, {1, b}});
  return out;
}

TEST(OracleProperty, NaturalEvaluationAgreesToDepthThree) {
  GenBounds b;
  b.exprDepth = 3;
  auto exprs = enumerateExprs(b);
  ASSERT_GT(exprs.size(), 300000u);
  auto window = stores(0, 3);
  std::size_t mismatches = 0;
  for (const auto& e : exprs)
    for (const auto& s : window) {
      Value want = oracle::evalExpr(e, [&s](Cell l) { return s.get(l); }, true);
      if (eval(s, e) != want && ++mismatches <= 5) ADD_FAILURE() << sexpr(e) << " at " << toString(s);
    }
  EXPECT_EQ(mismatches, 0u);
}

TEST(OracleProperty, IntegerEvaluationAgrees) {
  GenBounds b;
  b.exprDepth = 2;
  b.negativeLiterals = true;
  auto window = stores(-3, 3);
  for (const auto& e : enumerateExprs(b))
    for (const auto& s : window)
      ASSERT_EQ(evalInt(s, e), oracle::evalExpr(e, [&s](Cell l) { return s.get(l); }, false)) << sexpr(e);
  Rng rng(0x1A7);
  auto deep = enumerateExprs(GenBounds{2, 3, 1, true});
  for (int i = 0; i < 2000; ++i) {
    // Random depth-four trees over the depth-one atoms.
    std::function<Expr(int)> gen = [&](int d) -> Expr {
      if (d == 0 || rng.below(4) == 0) return deep[rng.below(deep.size())];
      if (rng.below(7) == 0) return Expr::un(UnOp::Not, gen(d - 1));
      return Expr::bin(static_cast<BinOp>(rng.below(6)), gen(d - 1), gen(d - 1));
    };
    Expr e = gen(4);
    const Store& s = window[rng.below(window.size())];
    ASSERT_EQ(evalInt(s, e), oracle::evalExpr(e, [&s](Cell l) { return s.get(l); }, false)) << sexpr(e);
  }
}

class RunAgreement : public ::testing::TestWithParam<std::string> {};

TEST_P(RunAgreement, EngineMatchesReferenceMachine) {
  const std::string& name = GetParam();
  const LangDef& lang = language(name);
  CampaignConfig cfg;
  GenBounds b = termBounds(lang, cfg);
  b.exprDepth = 2;
  auto window = inputWindow(lang, cfg);
  Rng rng(hashCombine(0x0AC1E, nameSeed(name)));
  for (int i = 0; i < 300; ++i) {
    Term p = randomTerm(lang.signature, b, 8, rng);
    const MachineState& in = window[rng.below(window.size())];
    RunResult got = run(lang, p, in, 60);
    oracle::RefRun want = oracle::refRun(name, p, in, 60);
    ASSERT_EQ(got.trace.size(), want.trace.size()) << pretty(p) << " at " << toString(in);
    for (std::size_t k = 0; k < got.trace.size(); ++k) {
      EXPECT_EQ(got.trace[k].state, want.trace[k].state) << pretty(p) << " step " << k;
      EXPECT_EQ(got.trace[k].label, want.trace[k].label) << pretty(p) << " step " << k;
      EXPECT_EQ(got.trace[k].continuation, want.trace[k].next) << pretty(p) << " step " << k;
    }
    EXPECT_EQ(got.terminated, want.terminated);
  }
}

INSTANTIATE_TEST_SUITE_P(Languages, RunAgreement,
                         ::testing::Values("while", "while-flag", "while-sec", "while-int", "while-b", "stack",
                                           "stack-clear"),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (auto& c : n)
                             if (c == '-') c = '_';
                           return n;
                         });

TEST(OracleProperty, LowMatchesPcMachine) {
  const LangDef& low = language("low");
  CampaignConfig cfg;
  GenBounds b = termBounds(low, cfg);
  b.exprDepth = 2;
  Rng rng(0x10F);
  for (int i = 0; i < 500; ++i) {
    Term p = randomTerm(low.signature, b, 6, rng);
    auto prog = oracle::instructions(p);
    auto window = inputWindow(low, cfg, prog.size());
    const MachineState& in = window[rng.below(window.size())];
    const PcState& ps = in.pcState();
    RunResult got = run(low, p, in, 40);
    oracle::PcRun want = oracle::runPcMachine(prog, ps.store, ps.pc, 40);
    EXPECT_EQ(got.trace.size(), want.steps) << pretty(p) << " at " << toString(in);
    EXPECT_EQ(got.terminated, want.halted) << pretty(p);
    EXPECT_EQ(got.state, MachineState(PcState{want.store, want.pc})) << pretty(p) << " at " << toString(in);
  }
}

TEST(OracleProperty, FlattenedProgramsComputeTheSameStore) {
  const LangDef& src = language("while");
  const LangDef& low = language("low");
  GenBounds b;
  b.exprDepth = 2;
  b.maxValue = 2;
  Rng rng(0xF1A7);
  std::size_t terminating = 0;
  for (int i = 0; i < 400; ++i) {
    Term p = randomTerm(src.signature, b, 7, rng);
    Store s{{0, static_cast<Value>(rng.below(4))}, {1, static_cast<Value>(rng.below(4))}};
    RunResult r = run(src, p, s, 200);
    if (!r.terminated) continue;
    ++terminating;
    auto prog = flattenToLow(p);
    oracle::PcRun m = oracle::runPcMachine(prog, s, 0, 2000);
    ASSERT_TRUE(m.halted) << pretty(p);
    EXPECT_EQ(m.store, r.state.store()) << pretty(p);
    EXPECT_EQ(m.pc, static_cast<Value>(prog.size())) << pretty(p);
    RunResult t = run(low, build::program(prog), PcState{s, 0}, 2000);
    EXPECT_EQ(t.state, MachineState(PcState{m.store, m.pc})) << pretty(p);
  }
  EXPECT_GT(terminating, 200u);
}

TEST(OracleProperty, ClosedExtensionIsStep) {
  for (const auto& name : languageNames()) {
    const LangDef& lang = language(name);
    CampaignConfig cfg;
    GenBounds b = termBounds(lang, cfg);
    Rng rng(nameSeed(name));
    for (int i = 0; i < 100; ++i) {
      Term p = randomTerm(lang.signature, b, 6, rng);
      auto window = inputWindow(lang, cfg, programLength(p));
      const MachineState& in = window[rng.below(window.size())];
      EXPECT_EQ(extendLaw(lang.law, p, closedEnv(), in), step(lang, p, in)) << name << " " << pretty(p);
    }
  }
}

}  // namespace
}  // namespace gsos
