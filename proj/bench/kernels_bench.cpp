#include <benchmark/benchmark.h>

#include "decolab/hilbert.hpp"
#include "decolab/kernels.hpp"
#include "decolab/localization.hpp"

namespace {

using namespace decolab;

Matrix random_matrix(Eigen::Index n) {
  std::srand(7);
  Matrix a = Matrix::Random(n, n);
  return a * a.adjoint();
}

void BM_PartialTrace(benchmark::State& state, bool reference) {
  const SubsystemSplit split({8, 8, 8});
  const Matrix rho = random_matrix(512);
  const std::size_t keep[] = {1};
  const auto blocks = make_index_blocks(split, keep);
  for (auto _ : state) {
    Matrix out = reference ? kernels::partial_trace_reference(rho, split, keep)
                           : kernels::partial_trace(rho, blocks);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_GaussianDamping(benchmark::State& state, bool reference) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GridSpec grid(n, -20.0, 20.0);
  const auto x = grid.positions();
  Matrix rho = random_matrix(static_cast<Eigen::Index>(n));
  for (auto _ : state) {
    if (reference) kernels::gaussian_damping_reference(rho, x, 1e-6);
    else kernels::gaussian_damping(rho, grid.dx(), 1e-6);
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_SpectralConjugation(benchmark::State& state, bool reference) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const kernels::SpectralConjugator fft(n);
  std::vector<cplx> phase(n);
  for (std::size_t k = 0; k < n; ++k) phase[k] = std::polar(1.0, 0.01 * static_cast<double>(k * k));
  Matrix rho = random_matrix(static_cast<Eigen::Index>(n));
  for (auto _ : state) {
    if (reference) rho = kernels::spectral_conjugate_reference(rho, phase);
    else fft.apply(rho, phase);
    benchmark::DoNotOptimize(rho.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_PartialTrace, parallel, false);
BENCHMARK_CAPTURE(BM_PartialTrace, serial_reference, true);
BENCHMARK_CAPTURE(BM_GaussianDamping, parallel, false)->Arg(256)->Arg(512);
BENCHMARK_CAPTURE(BM_GaussianDamping, serial_reference, true)->Arg(256)->Arg(512);
BENCHMARK_CAPTURE(BM_SpectralConjugation, parallel, false)->Arg(128)->Arg(256);
BENCHMARK_CAPTURE(BM_SpectralConjugation, serial_reference, true)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
