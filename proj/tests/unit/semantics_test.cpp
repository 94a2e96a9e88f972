#include <gtest/gtest.h>

#include "gsos/error.hpp"
#include "gsos/languages.hpp"
#include "gsos/syntax.hpp"

namespace gsos {
namespace {

using namespace build;

const LangDef& L(const std::string& n) { return language(n); }

std::vector<MachineState> stores2x3() {
  std::vector<MachineState> out;
  for (Value a = 0; a <= 3; ++a)
    for (Value b = 0; b <= 3; ++b) out.emplace_back(Store{{0, a}, {1, b}});
  return out;
}

Term aProg() { return loopWhile(Expr::var(0), assign(0, Expr::lit(0))); }
Term bProg() { return loopWhile(Expr::bin(BinOp::Mul, Expr::var(0), Expr::lit(2)), assign(0, Expr::lit(0))); }

Env fixedEnv(std::map<VarId, StepOutcome> outs) {
  auto tables = std::make_shared<std::map<VarId, BehaviorTable>>();
  for (auto& [v, o] : outs) {
    StepOutcome out = o;
    tables->emplace(v, BehaviorTable([out](const MachineState&) { return out; }, [](const MachineState&) { return true; }));
  }
  return tableEnv(tables);
}

TEST(ApplyLaw, SkipTerminates) {
  StepOutcome o = step(L("while"), skip(), Store{{0, 2}});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(Store{{0, 2}}));
}

TEST(ApplyLaw, SequencingContinues) {
  Store s1{{0, 1}};
  Env env = fixedEnv({{0, StepOutcome{s1, std::nullopt, Term::var(2), false}},
                      {1, StepOutcome{Store{}, std::nullopt, std::nullopt, false}}});
  StepOutcome o = extendLaw(L("while").law, seq(Term::var(0), Term::var(1)), env, Store{});
  EXPECT_EQ(o.state, MachineState(s1));
  EXPECT_EQ(o.continuation, seq(Term::var(2), Term::var(1)));
}

TEST(ApplyLaw, FlagAssignmentLabel) {
  StepOutcome o = step(L("while-flag"), assign(1, Expr::bin(BinOp::Add, Expr::var(0), Expr::lit(2))), Store{{0, 1}});
  EXPECT_EQ(o.label, 3);
  EXPECT_EQ(o.state, MachineState(Store{{0, 1}, {1, 3}}));
  EXPECT_TRUE(o.terminated());
}

TEST(ExtendLaw, VariableAnswersFromTable) {
  StepOutcome out{Store{{0, 3}}, std::nullopt, Term::var(1), false};
  Env env = fixedEnv({{0, out}});
  EXPECT_EQ(extendLaw(L("while").law, Term::var(0), env, Store{}), out);
}

TEST(ExtendLaw, SandboxErasesInnerLabel) {
  StepOutcome o = step(L("while-sec"), sandbox(assign(0, Expr::lit(2))), Store{});
  EXPECT_EQ(o.label, 0);
  EXPECT_EQ(o.state, MachineState(Store{{0, 2}}));
  EXPECT_TRUE(o.terminated());
}

TEST(ExtendLaw, ClosedTermsAgreeWithStep) {
  Term t = seq(aProg(), skip());
  for (const auto& s : stores2x3()) EXPECT_EQ(extendLaw(L("while").law, t, closedEnv(), s), step(L("while"), t, s));
}

TEST(ExtendLaw, ThreadsTermComponent) {
  Env env = fixedEnv({{0, StepOutcome{Store{}, std::nullopt, std::nullopt, false}}});
  auto [term, out] = extendLawWithTerm(L("while").law, seq(Term::var(0), skip()), env, Store{});
  EXPECT_EQ(term, seq(Term::var(0), skip()));
  EXPECT_EQ(out.continuation, skip());
}

TEST(ExtendLaw, MissingTableThrows) {
  auto tables = std::make_shared<std::map<VarId, BehaviorTable>>();
  tables->emplace(0, BehaviorTable([](const MachineState& s) { return StepOutcome{s, std::nullopt, std::nullopt, false}; },
                                   [](const MachineState& s) { return s.store().empty(); }));
  Env env = tableEnv(tables);
  EXPECT_NO_THROW(extendLaw(L("while").law, Term::var(0), env, Store{}));
  EXPECT_THROW(extendLaw(L("while").law, Term::var(0), env, Store{{0, 1}}), IncompleteTable);
  EXPECT_THROW(extendLaw(L("while").law, Term::var(1), env, Store{}), IncompleteTable);
}

TEST(BehaviorTable, ExplicitEntriesAndWiden) {
  BehaviorTable t([](const MachineState& s) { return StepOutcome{s, std::nullopt, std::nullopt, false}; },
                  [](const MachineState&) { return false; });
  Store s{{0, 1}};
  EXPECT_FALSE(t.covers(s));
  EXPECT_THROW(t(s), IncompleteTable);
  t.set(s, StepOutcome{Store{}, std::nullopt, std::nullopt, false});
  EXPECT_TRUE(t.covers(s));
  EXPECT_EQ(t(s).state, MachineState(Store{}));
  t.widen();
  EXPECT_NO_THROW(t(Store{{1, 1}}));
}

TEST(Step, WhileUnrollsOnNonzeroGuard) {
  StepOutcome o = step(L("while"), aProg(), Store{{0, 1}});
  EXPECT_EQ(o.state, MachineState(Store{{0, 1}}));
  EXPECT_EQ(o.continuation, seq(assign(0, Expr::lit(0)), aProg()));
}

TEST(Step, LowNegativePcTerminates) {
  Term p = program({Inst::nop(), Inst::stop()});
  StepOutcome o = step(L("low"), p, PcState{Store{}, -1});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(PcState{Store{}, -1}));
}

TEST(Step, FramePushesZeroFrame) {
  StepOutcome o = step(L("while-b"), frame(), FrameStack{});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(FrameStack{{{0, 0}}}));
}

TEST(Step, RejectsOpenAndForeignTerms) {
  EXPECT_THROW(step(L("while"), Term::var(0), Store{}), IllFormed);
  EXPECT_THROW(step(L("while"), frame(), Store{}), LanguageMismatch);
  EXPECT_THROW(step(L("while"), skip(), PcState{Store{}, 0}), IllFormed);
  EXPECT_THROW(step(L("while-b"), assign(2, Expr::lit(0)), FrameStack{}), IllFormed);
}

TEST(Step, Deterministic) {
  Term t = seq(bProg(), assign(1, Expr::var(0)));
  for (const auto& s : stores2x3()) EXPECT_EQ(step(L("while-flag"), t, s), step(L("while-flag"), t, s));
}

TEST(Run, SkipTerminatesInOneStep) {
  RunResult r = run(L("while"), skip(), Store{{1, 1}}, 10);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.state, MachineState(Store{{1, 1}}));
}

TEST(Run, ExampleOneSourceDiverges) {
  Term p = loopWhile(Expr::bin(BinOp::Lt, Expr::var(0), Expr::lit(2)), assign(1, Expr::bin(BinOp::Add, Expr::var(1), Expr::lit(1))));
  RunResult r = run(L("while"), p, Store{}, 50);
  EXPECT_FALSE(r.terminated);
  EXPECT_EQ(r.trace.size(), 50u);
  ASSERT_TRUE(r.residual.has_value());
}

TEST(Run, ExampleOneTargetRunsOffTheEnd) {
  Term p = parseTerm("(instr (br (not (lt (var 0) (lit 2))) 3) (assign 1 (add (var 1) (lit 1))) (br (lit 1) -2))", L("low"));
  RunResult r = run(L("low"), p, PcState{Store{{0, 5}}, 0}, 10);
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.state, MachineState(PcState{Store{{0, 5}}, 3}));
}

TEST(Run, ZeroFuel) {
  RunResult r = run(L("while"), skip(), Store{}, 0);
  EXPECT_FALSE(r.terminated);
  EXPECT_TRUE(r.trace.empty());
}

TEST(Unfold, Examples) {
  Store s{{0, 1}};
  BehaviorTree t1 = unfold(L("while"), skip(), {s}, 1);
  ASSERT_EQ(t1.branches.size(), 1u);
  EXPECT_TRUE(t1.branches[0].terminated);
  EXPECT_EQ(t1.branches[0].output, MachineState(s));

  BehaviorTree t2 = unfold(L("while"), seq(skip(), skip()), {s}, 2);
  ASSERT_EQ(t2.branches.size(), 1u);
  EXPECT_FALSE(t2.branches[0].terminated);
  ASSERT_TRUE(t2.branches[0].next);
  ASSERT_EQ(t2.branches[0].next->branches.size(), 1u);
  EXPECT_TRUE(t2.branches[0].next->branches[0].terminated);

  EXPECT_TRUE(unfold(L("while"), aProg(), {s}, 0).branches.empty());
}

TEST(Bisim, Reflexive) {
  BisimResult r = checkBisim(L("while"), aProg(), aProg(), stores2x3(), 20);
  EXPECT_TRUE(r.equivalent);
}

TEST(Bisim, ProgramsAAndBEquivalentInWhile) {
  BisimResult r = checkBisim(L("while"), aProg(), bProg(), stores2x3(), 20);
  EXPECT_TRUE(r.equivalent);
  EXPECT_EQ(r.depth, 20u);
  EXPECT_EQ(r.inputs, 16u);
}

TEST(Bisim, ProgramsAAndBDistinguishedByLabels) {
  BisimResult r = checkBisim(L("while-flag"), aProg(), bProg(), stores2x3(), 4);
  ASSERT_FALSE(r.equivalent);
  EXPECT_EQ(r.divergence, Divergence::Label);
  EXPECT_EQ(r.path.back(), MachineState(Store{{0, 1}}));
  EXPECT_EQ(r.left->label, 1);
  EXPECT_EQ(r.right->label, 2);
}

TEST(Bisim, StepCountingAttacker) {
  BisimResult r = checkBisim(L("while"), seq(skip(), skip()), skip(), stores2x3(), 5);
  EXPECT_FALSE(r.equivalent);
  EXPECT_EQ(r.divergence, Divergence::ContinuationPresence);
}

TEST(Bisim, AttackerChangesInputsBetweenSteps) {
  // Both write 1 then stop, but the second step of p re-reads the store.
  Term p = seq(skip(), assign(0, Expr::var(1)));
  Term q = seq(skip(), assign(0, Expr::lit(0)));
  EXPECT_TRUE(checkBisim(L("while"), p, q, {Store{}}, 5).equivalent);
  BisimResult r = checkBisim(L("while"), p, q, stores2x3(), 5);
  EXPECT_FALSE(r.equivalent);
  EXPECT_EQ(r.path.size(), 2u);
}

TEST(Divergence, Order) {
  StepOutcome a{Store{}, 1, std::nullopt, false};
  StepOutcome b{Store{{0, 1}}, 2, skip(), false};
  EXPECT_EQ(firstDivergence(a, b), Divergence::Label);
  b.label = 1;
  EXPECT_EQ(firstDivergence(a, b), Divergence::State);
  b.state = Store{};
  EXPECT_EQ(firstDivergence(a, b), Divergence::ContinuationPresence);
  a.continuation = frame();
  EXPECT_EQ(firstDivergence(a, b), Divergence::ContinuationTerm);
  EXPECT_EQ(firstDivergence(a, b, false), Divergence::None);
  EXPECT_EQ(divergenceName(Divergence::ContinuationPresence), "continuation-presence");
}

}  // namespace
}  // namespace gsos
