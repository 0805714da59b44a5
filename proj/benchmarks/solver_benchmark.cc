#include <benchmark/benchmark.h>

#include "heq/bench.hpp"
#include "heq/busemann.hpp"
#include "heq/solvers.hpp"

namespace {

heq::Point start(std::size_t n) {
  heq::CounterRng rng(1);
  return heq::sample_init(rng, n, 5, 20);
}

void BM_ResolventExample52(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = heq::LogAffineBifunction::example52(n);
  const heq::Resolvent j(f, 0.1, heq::Regularizer::Busemann);
  const heq::Point x = start(n);
  for (auto _ : state) benchmark::DoNotOptimize(j(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ResolventExample52)->RangeMultiplier(10)->Range(3, 3000)->Complexity();

void BM_ResolventDense(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  heq::Matrix a = heq::Matrix::Identity(n, n);
  a(0, n - 1) = 0.5;
  const auto f = heq::LogAffineBifunction::from_matrix(a);
  const heq::Resolvent j(f, 0.1, heq::Regularizer::Busemann);
  const heq::Point x = start(static_cast<std::size_t>(n));
  for (auto _ : state) benchmark::DoNotOptimize(j(x));
}
BENCHMARK(BM_ResolventDense)->Arg(3)->Arg(30)->Arg(300);

void BM_BusemannClosed(benchmark::State& state) {
  const auto m = heq::Manifold::log_orthant(static_cast<std::size_t>(state.range(0)));
  heq::CounterRng rng(2);
  const auto sample = heq::chart_box_sampler(m, -3, 3);
  const heq::GeodesicRay ray(m, sample(rng), sample(rng));
  const heq::Point y = sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(heq::busemann_closed(ray, y));
}
BENCHMARK(BM_BusemannClosed)->Arg(3)->Arg(1000);

void BM_Solve(benchmark::State& state, heq::Method method, bool literal) {
  const auto f = literal ? heq::LogAffineBifunction::example51()
                         : heq::LogAffineBifunction::example52(static_cast<std::size_t>(state.range(0)));
  const heq::Point x0 = start(f.dim());
  heq::SolverConfig cfg;
  cfg.tol = literal ? 1e-16 : 1e-8;
  cfg.record_trace = false;
  if (literal) cfg.variant = heq::ResolventVariant::PaperLiteralEx51;
  std::size_t iters = 0;
  for (auto _ : state) {
    const auto r = heq::solve(method, f, f.manifold(), x0, heq::StepSchedule::constant(0.03), cfg);
    iters = r.trace.iterations();
    benchmark::DoNotOptimize(r.solution);
  }
  state.counters["iterations"] = static_cast<double>(iters);
}
BENCHMARK_CAPTURE(BM_Solve, remb_example52, heq::Method::Remb, false)->Arg(3)->Arg(1000);
BENCHMARK_CAPTURE(BM_Solve, remd_example52, heq::Method::Remd, false)->Arg(3)->Arg(1000);
BENCHMARK_CAPTURE(BM_Solve, remb_example51_literal, heq::Method::Remb, true)->Arg(3);
BENCHMARK_CAPTURE(BM_Solve, remd_example51_literal, heq::Method::Remd, true)->Arg(3);

}  // namespace
BENCHMARK_MAIN();
