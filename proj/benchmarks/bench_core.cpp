#include <benchmark/benchmark.h>

#include <vector>

#include "lk/generators.hpp"
#include "lk/samplers.hpp"
#include "lk/stable_models.hpp"
#include "lk/verify.hpp"

namespace {

void BM_StableIncrement(benchmark::State& state) {
  auto p = lk::StableParams::symmetric_normalized(1.5);
  lk::RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(lk::stable_increment(p, 1e-3, rng));
}
BENCHMARK(BM_StableIncrement);

void BM_SegmentSample(benchmark::State& state) {
  auto lk = lk::build_lk(lk::StableModel{lk::StableParams::symmetric_normalized(1.5), lk::Flavor::KilledAtZero});
  lk::SegmentSampler s(lk.plus.levy, lk.plus.jump);
  lk::RngStream rng(2);
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(step, 1.0, rng));
}
BENCHMARK(BM_SegmentSample)->Arg(100)->Arg(1000);

void BM_GeneratorA0(benchmark::State& state) {
  auto p = lk::StableParams::symmetric_normalized(1.5);
  auto f = lk::default_battery()[0];
  for (auto _ : state) benchmark::DoNotOptimize(lk::generator_A0(f, 1.0, p));
}
BENCHMARK(BM_GeneratorA0)->Unit(benchmark::kMillisecond);

void BM_KsOneSample(benchmark::State& state) {
  lk::RngStream rng(3);
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (auto& x : xs) x = rng.exponential(1.0);
  auto cdf = [](double x) { return lk::exponential_cdf(1.0, x); };
  for (auto _ : state) benchmark::DoNotOptimize(lk::ks_one_sample(xs, cdf));
}
BENCHMARK(BM_KsOneSample)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
