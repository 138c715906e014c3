#include "jlab/hermitian.hpp"
#include "jlab/intersection.hpp"
#include "jlab/jflow.hpp"
#include "jlab/mollify.hpp"
#include "jlab/sampling.hpp"
#include "jlab/toric.hpp"

#include <benchmark/benchmark.h>

using namespace jlab;

static void BM_POperator(benchmark::State& state) {
  Rng rng(1);
  const int n = static_cast<int>(state.range(0));
  const auto a = random_positive_definite(rng, n);
  const auto b = random_positive_definite(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(p_operator(a, b));
}
BENCHMARK(BM_POperator)->DenseRange(2, 5);

static void BM_Mollify(benchmark::State& state) {
  Rng rng(2);
  const PeriodicGrid g(2, static_cast<int>(state.range(0)));
  const auto f = random_trig_field(rng, g, 4, 0.01);
  const auto kernel = MollifierKernel::standard(2);
  Mollifier m(g, kernel);
  m.load(f);
  for (auto _ : state) benchmark::DoNotOptimize(m.apply_loaded(0.15));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.size()));
}
BENCHMARK(BM_Mollify)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_TwistedResidual(benchmark::State& state) {
  Rng rng(3);
  const int res = static_cast<int>(state.range(0));
  const PeriodicGrid g(2, std::vector<int>{res, 1, 1, res});
  const auto pot = random_trig_field(rng, g, 3, 0.005);
  const TorusProblem p(FormField(g, HermitianForm::identity(2).scaled(2.0)),
                       background_form(g, HermitianForm::identity(2), &pot));
  const auto phi = random_trig_field(rng, g, 3, 0.005);
  for (auto _ : state) benchmark::DoNotOptimize(twisted_residual(phi, p));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.size()));
}
BENCHMARK(BM_TwistedResidual)->Arg(64)->Arg(128);

static void BM_FlowSteps(benchmark::State& state) {
  Rng rng(4);
  const PeriodicGrid g(2, std::vector<int>{32, 1, 1, 32});
  const auto pot = random_trig_field(rng, g, 3, 0.005);
  const TorusProblem p(FormField(g, HermitianForm::identity(2).scaled(2.0)),
                       background_form(g, HermitianForm::identity(2), &pot));
  FlowOptions opt;
  opt.max_steps = 100;
  opt.tol = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(jflow_run(p, opt));
}
BENCHMARK(BM_FlowSteps)->Unit(benchmark::kMillisecond);

static void BM_Verdict(benchmark::State& state) {
  const auto model = toric_to_geometry(ToricFan2D::hirzebruch(1));
  const ClassVector alpha{1, 1}, beta{Rational(29, 10), Rational(1, 10)};
  for (auto _ : state) benchmark::DoNotOptimize(j_verdict(model.geometry, alpha, beta));
}
BENCHMARK(BM_Verdict);

BENCHMARK_MAIN();
