// Microbenchmarks for the hot paths: kernel evaluation (cold quadrature vs
// memoized), the two moduli, and the windowed-infimum scan.

#include <benchmark/benchmark.h>

#include <random>

#include "specmod/inequalities.hpp"
#include "specmod/moduli.hpp"
#include "specmod/weights.hpp"

using namespace specmod;

namespace {

SpectralElement fixture_element() {
  std::mt19937_64 rng(42);
  ElementOptions eo;
  eo.integer_frequencies = false;
  eo.max_atoms = 8;
  return random_element(rng, eo);
}

void BM_gamma_cold(benchmark::State& state) {
  Weight V = weight_by_name("chernykh1");
  SymbolPair s = classical_symbol(2);
  for (auto _ : state) {
    GammaKernel k(V, s);  // fresh memo: every evaluation quadratures
    benchmark::DoNotOptimize(k(17.3));
  }
}
BENCHMARK(BM_gamma_cold)->Unit(benchmark::kMicrosecond);

void BM_gamma_warm(benchmark::State& state) {
  GammaKernel k(weight_by_name("chernykh1"), classical_symbol(2));
  benchmark::DoNotOptimize(k(17.3));
  for (auto _ : state) benchmark::DoNotOptimize(k(17.3));
}
BENCHMARK(BM_gamma_warm);

void BM_omega_sup(benchmark::State& state) {
  SpectralElement x = fixture_element();
  SymbolPair s = classical_symbol(2);
  for (auto _ : state) benchmark::DoNotOptimize(omega_sup(x, s, 1.3).value);
}
BENCHMARK(BM_omega_sup)->Unit(benchmark::kMicrosecond);

void BM_omega_pv_p1024(benchmark::State& state) {
  SpectralElement x = fixture_element();
  SymbolPair s = classical_symbol(1);
  Weight V = weight_by_name("uniform");
  for (auto _ : state)
    benchmark::DoNotOptimize(omega_pv(x, s, V, 1024, 1.3));
}
BENCHMARK(BM_omega_pv_p1024)->Unit(benchmark::kMillisecond);

void BM_window_scan_warm(benchmark::State& state) {
  GammaKernel k(weight_by_name("chernykh1"), classical_symbol(1));
  benchmark::DoNotOptimize(script_g(k, 1.0, M_PI).value);  // fill the memo
  for (auto _ : state)
    benchmark::DoNotOptimize(script_g(k, 1.0, M_PI).value);
}
BENCHMARK(BM_window_scan_warm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
