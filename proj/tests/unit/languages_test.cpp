#include <gtest/gtest.h>

#include "gsos/error.hpp"
#include "gsos/languages.hpp"
#include "gsos/syntax.hpp"

namespace gsos {
namespace {

using namespace build;

const LangDef& L(const std::string& n) { return language(n); }

Expr lit(Value v) { return Expr::lit(v); }
Expr var(Cell c) { return Expr::var(c); }
Expr add(Expr a, Expr b) { return Expr::bin(BinOp::Add, std::move(a), std::move(b)); }

TEST(LanguageRegistry, Names) {
  EXPECT_EQ(languageNames(), (std::vector<std::string>{"while", "while-flag", "while-sec", "while-int", "low", "low-sec",
                                                       "while-b", "stack", "stack-clear"}));
  for (const auto& n : languageNames()) EXPECT_EQ(L(n).name, n);
  EXPECT_THROW(L("nope"), UnknownName);
}

TEST(LanguageRegistry, LabelledLanguages) {
  EXPECT_FALSE(L("while").hasLabel);
  EXPECT_TRUE(L("while-flag").hasLabel);
  EXPECT_TRUE(L("while-sec").hasLabel);
  EXPECT_FALSE(L("low").hasLabel);
}

TEST(Eval, TruncatedAndIntegerSubtraction) {
  Expr e = Expr::bin(BinOp::Sub, var(0), lit(3));
  EXPECT_EQ(eval(Store{{0, 1}}, e), 0);
  EXPECT_EQ(evalInt(Store{{0, 1}}, e), -2);
  EXPECT_EQ(toNatStore(Store{{0, -2}, {1, 3}}), (Store{{1, 3}}));
}

TEST(Eval, FramesAndStackPointer) {
  FrameStack m{{{4, 5}, {6, 7}}};
  EXPECT_EQ(evalFrames(m, var(1), 2), 5);
  EXPECT_EQ(evalFrames(FrameStack{}, var(1), 2), 0);
  EXPECT_THROW(evalFrames(m, var(2), 2), IllFormed);
  Store s{{0, 6}, {1, 7}, {2, 4}, {3, 5}};
  EXPECT_EQ(evalSP(s, 2, var(1), 2), 5);
  EXPECT_EQ(evalSP(s, 1, var(1), 2), 7);
  EXPECT_THROW(evalSP(s, 0, var(0), 2), IllFormed);
  EXPECT_EQ(updateSP(Store{}, 2, 0, 9, 2), (Store{{2, 9}}));
  EXPECT_EQ(updateFrames(FrameStack{}, 0, 9, 2), FrameStack{});
}

TEST(While, AssignTerminates) {
  StepOutcome o = step(L("while"), assign(1, add(var(0), lit(1))), Store{{0, 2}});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(Store{{0, 2}, {1, 3}}));
  EXPECT_FALSE(o.label.has_value());
}

TEST(While, ZeroGuardExits) {
  Term w = loopWhile(var(0), skip());
  StepOutcome o = step(L("while"), w, Store{});
  EXPECT_EQ(o.continuation, skip());
}

TEST(WhileFlag, GuardLabelsItsValue) {
  Term w = loopWhile(var(0), assign(0, lit(0)));
  StepOutcome o = step(L("while-flag"), w, Store{{0, 2}});
  EXPECT_EQ(o.label, 2);
  EXPECT_EQ(step(L("while-flag"), skip(), Store{}).label, 0);
}

TEST(WhileSec, ObservationLogsLabels) {
  Term p = obs(3, seq(assign(0, lit(2)), assign(1, lit(1))));
  RunResult r = run(L("while-sec"), p, Store{}, 10);
  ASSERT_TRUE(r.terminated);
  EXPECT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.state, MachineState(Store{{0, 2}, {1, 1}, {3, 2}, {4, 1}}));
  EXPECT_EQ(r.trace[0].continuation, obs(4, assign(1, lit(1))));
}

TEST(WhileSec, SandboxedObservationSeesZero) {
  Term p = obs(3, sandbox(assign(0, lit(2))));
  RunResult r = run(L("while-sec"), p, Store{}, 10);
  EXPECT_EQ(r.state, MachineState(Store{{0, 2}}));
}

TEST(WhileInt, ToNatRunsOnNonnegativePart) {
  Term p = toNat(assign(1, add(var(0), lit(1))));
  StepOutcome o = step(L("while-int"), p, Store{{0, -3}});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(Store{{1, 1}}));
  StepOutcome raw = step(L("while-int"), assign(1, add(var(0), lit(1))), Store{{0, -3}});
  EXPECT_EQ(raw.state, MachineState(Store{{0, -3}, {1, -2}}));
}

TEST(Low, BranchTakenAndNotTaken) {
  Term p = program({Inst::br(var(0), 2), Inst::nop(), Inst::stop()});
  StepOutcome taken = step(L("low"), p, PcState{Store{{0, 1}}, 0});
  EXPECT_EQ(taken.state, MachineState(PcState{Store{{0, 1}}, 2}));
  EXPECT_EQ(taken.continuation, p);
  StepOutcome fall = step(L("low"), p, PcState{Store{}, 0});
  EXPECT_EQ(fall.state, MachineState(PcState{Store{}, 1}));
}

TEST(Low, StopHaltsInPlace) {
  Term p = program({Inst::nop(), Inst::stop()});
  StepOutcome o = step(L("low"), p, PcState{Store{}, 1});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(PcState{Store{}, 1}));
}

TEST(Low, OutOfRangeTerminatesUnchanged) {
  Term p = program({Inst::nop(), Inst::stop()});
  for (Value pc : {-2, -1, 2, 5}) {
    StepOutcome o = step(L("low"), p, PcState{Store{{0, 1}}, pc});
    EXPECT_TRUE(o.terminated()) << pc;
    EXPECT_EQ(o.state, MachineState(PcState{Store{{0, 1}}, pc})) << pc;
  }
}

TEST(Low, ProgramLength) {
  EXPECT_EQ(programLength(program({Inst::nop(), Inst::stop(), Inst::nop()})), 3u);
  EXPECT_EQ(programLength(skip()), 1u);
}

TEST(LowSec, LoopRunsToStop) {
  Term p = loop(Expr::bin(BinOp::Lt, var(0), lit(2)), instr(Inst::assign(0, add(var(0), lit(1)))));
  RunResult r = run(L("low-sec"), p, PcState{Store{}, 0}, 20);
  ASSERT_TRUE(r.terminated);
  EXPECT_EQ(r.trace.size(), 6u);
  EXPECT_EQ(r.state, MachineState(PcState{Store{{0, 2}}, 1}));
  EXPECT_EQ(r.trace[4].continuation, instr(Inst::stop()));
}

TEST(LowSec, SingletonsTerminateAtPcOne) {
  StepOutcome o = step(L("low-sec"), instr(Inst::assign(0, lit(2))), PcState{Store{}, 0});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(PcState{Store{{0, 2}}, 1}));
}

TEST(LowSec, CompositionAwayFromZeroTerminates) {
  Term p = seqc(instr(Inst::stop()), instr(Inst::stop()));
  StepOutcome o = step(L("low-sec"), p, PcState{Store{}, 3});
  EXPECT_TRUE(o.terminated());
  EXPECT_EQ(o.state, MachineState(PcState{Store{}, 3}));
}

TEST(WhileB, FrameAndReturn) {
  StepOutcome f = step(L("while-b"), frame(), FrameStack{{{1, 2}}});
  EXPECT_EQ(f.state, MachineState(FrameStack{{{0, 0}, {1, 2}}}));
  StepOutcome r = step(L("while-b"), ret(), FrameStack{{{0, 0}, {1, 2}}});
  EXPECT_EQ(r.state, MachineState(FrameStack{{{1, 2}}}));
}

TEST(WhileB, ReturnOnEmptyStackIsTotalized) {
  StepOutcome r = step(L("while-b"), ret(), FrameStack{});
  EXPECT_TRUE(r.terminated());
  EXPECT_EQ(r.state, MachineState(FrameStack{}));
  EXPECT_TRUE(r.totalized);
}

TEST(WhileB, AssignWritesHeadFrame) {
  StepOutcome o = step(L("while-b"), assign(1, lit(3)), FrameStack{{{0, 0}, {1, 2}}});
  EXPECT_EQ(o.state, MachineState(FrameStack{{{0, 3}, {1, 2}}}));
}

TEST(Stack, FrameLeavesStaleCells) {
  StepOutcome o = step(L("stack"), frame(), SpState{Store{{2, 5}}, 1});
  EXPECT_EQ(o.state, MachineState(SpState{Store{{2, 5}}, 2}));
  StepOutcome r = step(L("stack"), assign(0, var(0)), SpState{Store{{2, 5}}, 2});
  EXPECT_EQ(r.state, MachineState(SpState{Store{{2, 5}}, 2}));
}

TEST(StackClear, FrameZeroesItsBlock) {
  RunResult r = run(L("stack-clear"), seq(frame(), assign(1, lit(2))), SpState{Store{{2, 5}, {3, 5}}, 1}, 5);
  ASSERT_TRUE(r.terminated);
  EXPECT_EQ(r.state, MachineState(SpState{Store{{3, 2}}, 2}));
}

TEST(Stack, ZeroPointerIsTotalized) {
  StepOutcome o = step(L("stack"), assign(0, add(var(1), lit(1))), SpState{Store{{0, 4}}, 0});
  EXPECT_TRUE(o.totalized);
  EXPECT_EQ(o.state, MachineState(SpState{Store{{0, 4}}, 0}));
  StepOutcome r = step(L("stack"), ret(), SpState{Store{}, 0});
  EXPECT_EQ(r.state, MachineState(SpState{Store{}, 0}));
}

TEST(WellFormed, RejectsOutOfFrameVariables) {
  EXPECT_THROW(parseTerm("(assign 2 (lit 0))", L("while-b")), IllFormed);
  EXPECT_THROW(parseTerm("(assign 0 (var 2))", L("stack")), IllFormed);
  EXPECT_NO_THROW(parseTerm("(assign 2 (lit 0))", L("while")));
}

TEST(WellFormed, RejectsForeignConstructors) {
  EXPECT_THROW(parseTerm("(sandbox skip)", L("while")), LanguageMismatch);
  EXPECT_THROW(parseTerm("frame", L("while-sec")), LanguageMismatch);
  EXPECT_THROW(parseTerm("(instr nop)", L("while")), LanguageMismatch);
}

TEST(FrameLength, RegistryHonoursLength) {
  const LangDef& s3 = language("stack-clear", 3);
  RunResult r = run(s3, frame(), SpState{Store{{3, 1}, {4, 1}, {5, 1}, {6, 1}}, 1}, 2);
  EXPECT_EQ(r.state, MachineState(SpState{Store{{6, 1}}, 2}));
}

}  // namespace
}  // namespace gsos
