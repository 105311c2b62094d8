#include "doctest.h"

#include <random>

#include "decolab/hilbert.hpp"
#include "decolab/kernels.hpp"
#include "oracles.hpp"

using namespace decolab;

TEST_CASE("parallel partial trace matches the serial reference and the oracle") {
  std::mt19937_64 rng(31);
  const std::vector<std::size_t> dims{2, 3, 4};
  const SubsystemSplit split(dims);
  const Matrix rho = oracle::random_density(rng, 24);
  for (const std::vector<std::size_t>& keep :
       {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
    const auto blocks = make_index_blocks(split, keep);
    const Matrix fast = kernels::partial_trace(rho, blocks);
    const Matrix ref = kernels::partial_trace_reference(rho, split, keep);
    CHECK(oracle::max_abs(Matrix(fast - ref)) < 1e-15);
    CHECK(oracle::max_abs(Matrix(fast - oracle::partial_trace(rho, dims, keep))) < 1e-15);
  }
}

TEST_CASE("gaussian damping matches the reference") {
  std::mt19937_64 rng(32);
  Matrix a = oracle::random_density(rng, 64);
  Matrix b = a;
  std::vector<double> x(64);
  for (std::size_t i = 0; i < 64; ++i) x[i] = -3.0 + 0.1 * static_cast<double>(i);
  kernels::gaussian_damping(a, 0.1, 0.7);
  kernels::gaussian_damping_reference(b, x, 0.7);
  CHECK(oracle::max_abs(Matrix(a - b)) < 1e-15);
}

TEST_CASE("sector dephasing matches the reference") {
  std::mt19937_64 rng(33);
  Matrix a = oracle::random_density(rng, 10);
  Matrix b = a;
  const std::vector<int> sector{0, 1, 1, 2, 0, 1, 2, 2, 0, 1};
  kernels::dephase_sectors(a, sector, 0.3);
  kernels::dephase_sectors_reference(b, sector, 0.3);
  CHECK(oracle::max_abs(Matrix(a - b)) == 0.0);
}

TEST_CASE("spectral conjugation matches the dense DFT reference") {
  std::mt19937_64 rng(34);
  for (std::size_t n : {16u, 64u}) {
    Matrix a = oracle::random_density(rng, n);
    std::vector<cplx> phase(n);
    std::uniform_real_distribution<double> u(0.0, 6.28);
    for (auto& p : phase) p = std::polar(1.0, u(rng));
    const Matrix ref = kernels::spectral_conjugate_reference(a, phase);
    kernels::SpectralConjugator(n).apply(a, phase);
    CHECK(oracle::max_abs(Matrix(a - ref)) < 1e-13);
  }
  kernels::SpectralConjugator fft(16);
  Matrix wrong = Matrix::Identity(8, 8);
  std::vector<cplx> phase(16, 1.0);
  CHECK_THROWS(fft.apply(wrong, phase));
}
