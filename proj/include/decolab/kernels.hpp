#pragma once

// Dense data-parallel kernels. Each OpenMP kernel has a serial reference
// implementation that follows an independent route; the references are kept
// for the kernel tests and the benchmark, not for production use.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "decolab/hilbert.hpp"
#include "decolab/types.hpp"

namespace decolab::kernels {

/// Reduced matrix over `blocks.block_factors`:
///   out(a, a') = Σ_b rho(block[a] + rest[b], block[a'] + rest[b]).
Matrix partial_trace(const Matrix& rho, const IndexBlocks& blocks);

/// Serial reference: decodes every flat index pair into per-factor digits and
/// accumulates entries whose traced digits coincide.
Matrix partial_trace_reference(const Matrix& rho, const SubsystemSplit& split,
                               std::span<const std::size_t> keep);

/// rho(i, j) *= exp(-rate_dt * ((i - j) * dx)^2) on a uniform grid.
void gaussian_damping(Matrix& rho, double dx, double rate_dt);

/// Serial reference from explicit positions, one exp() per entry.
void gaussian_damping_reference(Matrix& rho, std::span<const double> positions,
                                double rate_dt);

/// rho(i, j) *= factor whenever sector[i] != sector[j].
void dephase_sectors(Matrix& rho, std::span<const int> sector, double factor);
void dephase_sectors_reference(Matrix& rho, std::span<const int> sector,
                               double factor);

/// Applies rho -> U rho U^dagger with U = F^-1 diag(phase) F, F the DFT on a
/// grid of n points. FFTW plans are created once; apply() may be called from
/// one thread at a time and parallelises internally over rows and columns.
class SpectralConjugator {
 public:
  explicit SpectralConjugator(std::size_t n);
  ~SpectralConjugator();
  SpectralConjugator(const SpectralConjugator&) = delete;
  SpectralConjugator& operator=(const SpectralConjugator&) = delete;
  SpectralConjugator(SpectralConjugator&&) noexcept;
  SpectralConjugator& operator=(SpectralConjugator&&) noexcept;

  std::size_t size() const noexcept;

  void apply(Matrix& rho, std::span<const cplx> phase) const;

  /// Unnormalised DFT along every column (sign -1 forward, +1 backward).
  void transform_columns(Matrix& m, int sign) const;
  /// Unnormalised DFT along every row.
  void transform_rows(Matrix& m, int sign) const;

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Serial reference: builds the dense DFT matrix and evaluates U rho U^dagger
/// with two matrix products.
Matrix spectral_conjugate_reference(const Matrix& rho,
                                    std::span<const cplx> phase);

/// Number of OpenMP threads the kernels will use.
int max_threads();

}  // namespace decolab::kernels
