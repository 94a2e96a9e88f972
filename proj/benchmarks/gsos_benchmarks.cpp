#include <benchmark/benchmark.h>

#include "gsos/checker.hpp"

namespace {

using namespace gsos;
using namespace gsos::build;

Term countingLoop() {
  return loopWhile(Expr::bin(BinOp::Lt, Expr::var(0), Expr::lit(50)),
                   assign(0, Expr::bin(BinOp::Add, Expr::var(0), Expr::lit(1))));
}

void BM_Step(benchmark::State& state) {
  const LangDef& lang = language("while");
  Term p = seq(countingLoop(), skip());
  Store s{{0, 3}};
  for (auto _ : state) benchmark::DoNotOptimize(step(lang, p, s));
}
BENCHMARK(BM_Step);

void BM_RunCountingLoop(benchmark::State& state) {
  const LangDef& lang = language("while");
  Term p = countingLoop();
  for (auto _ : state) benchmark::DoNotOptimize(run(lang, p, Store{}, 1000));
}
BENCHMARK(BM_RunCountingLoop);

void BM_RunFlattenedLoop(benchmark::State& state) {
  const LangDef& lang = language("low");
  Term p = program(flattenToLow(countingLoop()));
  for (auto _ : state) benchmark::DoNotOptimize(run(lang, p, PcState{Store{}, 0}, 1000));
}
BENCHMARK(BM_RunFlattenedLoop);

void BM_ExtendLawOpen(benchmark::State& state) {
  const LangDef& lang = language("while-flag");
  CampaignConfig cfg;
  Env env = tableEnv(sampleTables(lang, cfg, 0));
  Term t = seq(seq(Term::var(0), Term::var(1)), loopWhile(Expr::var(0), Term::var(2)));
  Store s{{0, 1}};
  for (auto _ : state) benchmark::DoNotOptimize(extendLaw(lang.law, t, env, s));
}
BENCHMARK(BM_ExtendLawOpen);

void BM_Bisim(benchmark::State& state) {
  const LangDef& lang = language("while");
  CampaignConfig cfg;
  auto window = inputWindow(lang, cfg);
  Term a = loopWhile(Expr::var(0), assign(0, Expr::lit(0)));
  Term b = loopWhile(Expr::bin(BinOp::Mul, Expr::var(0), Expr::lit(2)), assign(0, Expr::lit(0)));
  for (auto _ : state) benchmark::DoNotOptimize(checkBisim(lang, a, b, window, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Bisim)->Arg(5)->Arg(20);

void BM_Coherence(benchmark::State& state, const char* name) {
  CampaignConfig cfg;
  cfg.maxExprDepth = 1;
  const CompilerPair& cp = compiler(name);
  if (!cp.openCheckable()) cfg.mode = CampaignMode::Closed;
  for (auto _ : state) benchmark::DoNotOptimize(checkCoherence(cp, cfg));
}
BENCHMARK_CAPTURE(BM_Coherence, sandbox, "sandbox")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Coherence, embed_low_sec, "embed-low-sec")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Coherence, flatten_low, "flatten-low")->Unit(benchmark::kMillisecond);

void BM_DerivativeCount(benchmark::State& state) {
  SpfExpr f = language("while-sec").signature.spf();
  CarrierSizes sizes{{"Nat", 4}, {"Expr", 228}};
  for (auto _ : state) benchmark::DoNotOptimize(countPositions(derive(f), sizes, 8));
}
BENCHMARK(BM_DerivativeCount);

}  // namespace

BENCHMARK_MAIN();
