#include <benchmark/benchmark.h>

#include <random>

#include "mphp/baselines.hpp"
#include "mphp/experiment.hpp"

namespace {

using namespace mphp;

HermitianMatrix random_psd(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix x(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) x(i, j) = Complex(n(rng), n(rng));
  return HermitianMatrix(x * x.adjoint());
}

SystemConfig config_with_antennas(int M) {
  SystemConfig c;
  c.antennas = M;
  return c;
}

void BM_HermitianEig(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const HermitianMatrix a = random_psd(state.range(0), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(a));
}
BENCHMARK(BM_HermitianEig)->Arg(16)->Arg(64)->Arg(128);

void BM_SolveAlphaStar(benchmark::State& state) {
  const Scenario s = prepare_scenario(config_with_antennas(static_cast<int>(state.range(0))), 7);
  const HermitianMatrix leak = leakage_correlation(s.grouping, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_alpha_star(s.grouping.group_correlations[0], leak, s.grouping.size(0),
                                              s.grouping.user_count(), 1.0));
  }
}
BENCHMARK(BM_SolveAlphaStar)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_GrfpAssign(benchmark::State& state) {
  const Scenario s = prepare_scenario(config_with_antennas(static_cast<int>(state.range(0))), 7);
  const RelaxedSolution relaxed = solve_relaxed(s.grouping, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(grfp_assign(relaxed, s.grouping, 4, s.geometry.antenna_count));
}
BENCHMARK(BM_GrfpAssign)->Arg(64)->Arg(128);

void BM_SlotEvaluation(benchmark::State& state) {
  const SystemConfig c = config_with_antennas(64);
  const Scenario s = prepare_scenario(c, 7);
  const DesignOptions opts = design_options(c);
  const auto scheme = static_cast<SchemeId>(state.range(0));
  const LongTermDesign design = design_long_term(scheme, s.grouping, opts);
  std::uint64_t slot = 0;
  for (auto _ : state) {
    const ComplexMatrix h = draw_channel(s.users, s.geometry, 3, slot++).H;
    benchmark::DoNotOptimize(evaluate_slot(design, h, opts));
  }
  state.SetLabel(std::string(scheme_name(scheme)));
}
BENCHMARK(BM_SlotEvaluation)->DenseRange(0, 4);

}  // namespace

BENCHMARK_MAIN();
