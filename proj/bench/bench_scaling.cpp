#include <benchmark/benchmark.h>

#include <random>

#include "sysmat/scaling.hpp"

using namespace sysmat;

namespace {

ComplexMatrix random_dense(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void BM_BuildM(benchmark::State& state) {
  const Index n = state.range(0);
  const ComplexMatrix a = random_dense(n, n + 8, 1);
  const ComplexMatrix b = random_dense(n, n + 8, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::build_M(a, b, exec_of(state)));
}

void BM_MatVec(benchmark::State& state) {
  const Index n = state.range(0);
  const RealMatrix m = kernels::build_M(random_dense(n, n, 3), random_dense(n, n, 4), Exec::serial);
  const RealVector y = RealVector::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::mat_vec(m, y, exec_of(state)));
}

void BM_Approach1(benchmark::State& state) {
  const Index n = state.range(0);
  const ComplexMatrix a = random_dense(n, n + 8, 5);
  const ComplexMatrix b = random_dense(n, n + 8, 6);
  ScalingOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(scale_approach1(a, b, 1.0, 1.0, opts));
}

void BM_Approach2(benchmark::State& state) {
  const Index n = state.range(0);
  const ComplexMatrix a = random_dense(n, n + 8, 7);
  const ComplexMatrix b = random_dense(n, n + 8, 8);
  ScalingOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(scale_approach2(a, b, 1.0, 1.0, opts));
}

// second argument: 0 serial reference, 1 OpenMP
BENCHMARK(BM_BuildM)->ArgsProduct({{64, 256, 1024}, {0, 1}});
BENCHMARK(BM_MatVec)->ArgsProduct({{64, 256, 1024}, {0, 1}});
BENCHMARK(BM_Approach1)->ArgsProduct({{32, 128}, {0, 1}});
BENCHMARK(BM_Approach2)->ArgsProduct({{32, 128}, {0, 1}});

}  // namespace

BENCHMARK_MAIN();
