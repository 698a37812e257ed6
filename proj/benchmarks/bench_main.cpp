#include <benchmark/benchmark.h>

#include "copert/bounds.hpp"
#include "copert/composition.hpp"
#include "copert/stern.hpp"
#include "copert/thue_morse.hpp"

namespace {

void BM_TmMoments(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(copert::tm::tm_moments(k, 16));
}
BENCHMARK(BM_TmMoments)->Arg(2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SternMoments(benchmark::State& state) {
  const int tau = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(copert::stern::stern_moments(tau, 20));
}
BENCHMARK(BM_SternMoments)->Arg(1)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SigmaEigen(benchmark::State& state) {
  const int tau = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(copert::stern::sigma_eigen(tau));
}
BENCHMARK(BM_SigmaEigen)->Arg(4)->Arg(16)->Arg(40);

void BM_XiEval(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(copert::tm::xi_eval(x));
    x = x < 0.9 ? x + 0.01 : 0.1;
  }
}
BENCHMARK(BM_XiEval);

void BM_IterateDirect(benchmark::State& state) {
  const copert::CompositionSystem sys = copert::tm::tm_system(4.0);
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(copert::iterate_direct(sys, r, 0.3));
}
BENCHMARK(BM_IterateDirect)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

void BM_IterateWordSum(benchmark::State& state) {
  const copert::CompositionSystem sys = copert::tm::tm_system(4.0);
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(copert::iterate_word_sum(sys, r, 0.3));
}
BENCHMARK(BM_IterateWordSum)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_RadiusBracket(benchmark::State& state) {
  const copert::ApplicationProfile app = copert::stern::build_stern_profile(6.0);
  for (auto _ : state) benchmark::DoNotOptimize(copert::radius_bracket(app.profile));
}
BENCHMARK(BM_RadiusBracket)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
