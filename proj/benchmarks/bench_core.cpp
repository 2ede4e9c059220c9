#include <benchmark/benchmark.h>

#include <vector>

#include "gaborfio/analysis.hpp"
#include "gaborfio/fft.hpp"
#include "gaborfio/fio.hpp"
#include "gaborfio/gabor.hpp"
#include "gaborfio/metaplectic.hpp"

using namespace gaborfio;

namespace {

Grid square_grid(benchmark::State& state) {
  const double L = static_cast<double>(state.range(0));
  return Grid(1, L, static_cast<int>(L * L));
}

Vec origin() { return Vec::Constant(1, 0.0); }

}  // namespace

static void BM_CenteredFft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<cplx> data(n, cplx(1.0, -0.5));
  for (auto _ : state) {
    fft::centered_dft(data, n, 1, fft::Direction::forward);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_CenteredFft)->RangeMultiplier(4)->Range(256, 16384);

static void BM_Stft(benchmark::State& state) {
  const auto grid = square_grid(state);
  const auto g = gaussian(grid, origin(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(stft(g, g).values.data());
}
BENCHMARK(BM_Stft)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_TightWindow(benchmark::State& state) {
  const auto grid = square_grid(state);
  const Lattice lat(grid, 0.5, 0.5);
  const auto g = gaussian(grid, origin(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tight_window(g, lat).values.data());
}
BENCHMARK(BM_TightWindow)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ApplyFio(benchmark::State& state) {
  const auto grid = square_grid(state);
  const auto phase = catalog_phase("sine-perturbed", 1);
  const auto f = gaussian(grid, origin(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_fio(phase, Symbol(), f).values.data());
}
BENCHMARK(BM_ApplyFio)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ApplyFactors(benchmark::State& state) {
  const auto grid = square_grid(state);
  const auto factors = factorize(*catalog_phase("chirp", 1).quadratic_form());
  const auto f = gaussian(grid, origin(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_factors(factors, f).values.data());
}
BENCHMARK(BM_ApplyFactors)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_GaborMatrixDirect(benchmark::State& state) {
  const auto grid = square_grid(state);
  const auto gs = GaborSystem::build(gaussian(grid, origin(), 1.0), Lattice(grid, 0.5, 0.5));
  const auto phase = catalog_phase("chirp", 1);
  for (auto _ : state) benchmark::DoNotOptimize(gabor_matrix_direct(phase, Symbol(), gs).nnz());
}
BENCHMARK(BM_GaborMatrixDirect)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GaborMatrixSymbolStft(benchmark::State& state) {
  const auto grid = square_grid(state);
  const auto gs = GaborSystem::build(gaussian(grid, origin(), 1.0), Lattice(grid, 0.5, 0.5));
  const auto phase = catalog_phase("chirp", 1);
  const auto sym = sample_symbol(Symbol(), grid);
  for (auto _ : state) benchmark::DoNotOptimize(gabor_matrix_via_symbol_stft(phase, sym, gs).nnz());
}
BENCHMARK(BM_GaborMatrixSymbolStft)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ModNorm(benchmark::State& state) {
  const auto grid = square_grid(state);
  const auto f = dilated_gaussian(grid, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(mod_norm(f, {kInf, 1.0, 0.0}));
}
BENCHMARK(BM_ModNorm)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
