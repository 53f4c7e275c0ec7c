// benchmarks/bench_apply.cpp
//
// Fast circulant-embedded applies against the dense window matvec, plus the
// windowed SVD path that compactness scans lean on.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "hardylab/operators.hpp"

using namespace hardylab;

namespace {

Symbol bench_symbol(long deg) {
  std::mt19937_64 g(99);
  auto u = [&g] { return static_cast<double>(g() >> 11) * 0x1.0p-53; };
  std::map<long, cplx> m;
  for (long n = -deg; n <= deg; ++n) m[n] = cplx(2 * u() - 1, 2 * u() - 1);
  return Symbol::trig_poly(m);
}

Vec bench_vector(long n) {
  std::mt19937_64 g(7);
  auto u = [&g] { return static_cast<double>(g() >> 11) * 0x1.0p-53; };
  Vec x(n);
  for (long i = 0; i < n; ++i) x[i] = cplx(2 * u() - 1, 2 * u() - 1);
  return x;
}

}  // namespace

static void BM_toeplitz_apply_fast(benchmark::State& state) {
  const long n = state.range(0);
  const Symbol f = bench_symbol(16);
  const Vec x = bench_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(toeplitz_apply(f, x, n));
}
BENCHMARK(BM_toeplitz_apply_fast)->Range(256, 1 << 15);

static void BM_toeplitz_apply_dense(benchmark::State& state) {
  const long n = state.range(0);
  const Symbol f = bench_symbol(16);
  const Vec x = bench_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(toeplitz_apply_dense(f, x, n));
}
BENCHMARK(BM_toeplitz_apply_dense)->Range(256, 4096);

static void BM_hankel_apply_fast(benchmark::State& state) {
  const long n = state.range(0);
  const Symbol f = bench_symbol(16);
  const Vec x = bench_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(hankel_apply(f, x, n));
}
BENCHMARK(BM_hankel_apply_fast)->Range(256, 1 << 15);

static void BM_hankel_apply_dense(benchmark::State& state) {
  const long n = state.range(0);
  const Symbol f = bench_symbol(16);
  const Vec x = bench_vector(n);
  for (auto _ : state) benchmark::DoNotOptimize(hankel_apply_dense(f, x, n));
}
BENCHMARK(BM_hankel_apply_dense)->Range(256, 4096);

static void BM_hankel_svd(benchmark::State& state) {
  const long n = state.range(0);
  const Symbol f = Symbol::arc_indicator(0.0, kPi);
  for (auto _ : state) benchmark::DoNotOptimize(hankel_svd(f, n));
}
BENCHMARK(BM_hankel_svd)->Arg(128)->Arg(256)->Arg(512);

BENCHMARK_MAIN();
