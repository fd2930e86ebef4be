#include <numbers>

#include <benchmark/benchmark.h>

#include "fourphoton/analysis.hpp"
#include "fourphoton/circuit.hpp"
#include "fourphoton/family.hpp"
#include "fourphoton/imperfections.hpp"
#include "fourphoton/tomo.hpp"

using namespace fourphoton;

namespace {

constexpr double kPi = std::numbers::pi;

void BM_Pipeline(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(0.3));
}
BENCHMARK(BM_Pipeline);

void BM_Correlations(benchmark::State& state) {
  const QubitState4 psi = family_state(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(correlations(psi));
}
BENCHMARK(BM_Correlations);

void BM_CorrelationsMixed(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::pure(family_state(0.3)).mixed_with(DensityMatrix::maximally_mixed(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(correlations(rho));
}
BENCHMARK(BM_CorrelationsMixed);

void BM_BiseparableBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(biseparable_bound(0.3));
}
BENCHMARK(BM_BiseparableBound);

void BM_SettingCover(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(setting_cover(0.05 * kPi));
}
BENCHMARK(BM_SettingCover);

void BM_FindCrossings(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_crossings());
}
BENCHMARK(BM_FindCrossings)->Unit(benchmark::kMillisecond);

void BM_SimulateCounts(benchmark::State& state) {
  const DensityMatrix rho = DensityMatrix::pure(family_state(kPi / 4.0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_counts(rho, 100000, 1));
}
BENCHMARK(BM_SimulateCounts)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const auto freqs = exact_frequencies(DensityMatrix::pure(family_state(kPi / 4.0)));
  const auto method = static_cast<ReconstructionMethod>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(freqs, method));
}
BENCHMARK(BM_Reconstruct)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HigherOrder(benchmark::State& state) {
  const NoiseConfig cfg{0.05, 0.2, 1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(higher_order_fourfolds(0.098 * kPi, cfg));
}
BENCHMARK(BM_HigherOrder)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode from another compiler
// release, so the entry point is defined here.
BENCHMARK_MAIN();
