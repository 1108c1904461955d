#include <benchmark/benchmark.h>

#include "linbandit/environment.hpp"
#include "linbandit/linalg.hpp"
#include "linbandit/policies.hpp"

using namespace linbandit;

namespace {

RidgeState warm_state(int d, int updates, std::uint64_t seed) {
  Rng rng(seed);
  RidgeState state(d, 1.0, 1.0);
  for (int s = 0; s < updates; ++s) {
    Vector a(d);
    for (int i = 0; i < d; ++i) a(i) = rng.normal();
    state.update(a, rng.normal());
  }
  return state;
}

void BM_RidgeUpdate(benchmark::State& bm) {
  const int d = static_cast<int>(bm.range(0));
  RidgeState state = warm_state(d, 32, 1);
  Rng rng(2);
  Vector a(d);
  for (int i = 0; i < d; ++i) a(i) = rng.normal();
  for (auto _ : bm) {
    state.update(a, 1.0);
    benchmark::DoNotOptimize(state.cov().data());
  }
}
BENCHMARK(BM_RidgeUpdate)->Arg(12)->Arg(120);

void BM_Cholesky(benchmark::State& bm) {
  const int d = static_cast<int>(bm.range(0));
  const Matrix cov = warm_state(d, 4 * d, 3).cov();
  for (auto _ : bm) {
    Matrix l = cholesky_factor(cov);
    benchmark::DoNotOptimize(l.data());
  }
}
BENCHMARK(BM_Cholesky)->Arg(12)->Arg(120);

void BM_SelectOful(benchmark::State& bm) {
  const int d = static_cast<int>(bm.range(0));
  RidgeState state = warm_state(d, 64, 4);
  Rng rng(5);
  ActionSet set = gen_scenario_two(rng, 10, d, 5.0);
  for (auto _ : bm) {
    benchmark::DoNotOptimize(select_oful(state, 13.0, set));
  }
}
BENCHMARK(BM_SelectOful)->Arg(120);

void BM_SelectTs(benchmark::State& bm) {
  const int d = static_cast<int>(bm.range(0));
  RidgeState state = warm_state(d, 64, 6);
  Rng rng(7);
  ActionSet set = gen_scenario_two(rng, 10, d, 5.0);
  for (auto _ : bm) {
    benchmark::DoNotOptimize(select_ts(state, 1.0, set, rng));
  }
}
BENCHMARK(BM_SelectTs)->Arg(120);

void BM_SelectSg(benchmark::State& bm) {
  const int d = static_cast<int>(bm.range(0));
  RidgeState state = warm_state(d, 64, 8);
  Rng rng(9);
  ActionSet set = gen_scenario_two(rng, 10, d, 5.0);
  for (auto _ : bm) {
    benchmark::DoNotOptimize(select_sg(state, 13.0, 0.5, set));
  }
}
BENCHMARK(BM_SelectSg)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
