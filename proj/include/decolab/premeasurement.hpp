#pragma once

// Ideal von Neumann premeasurement, environmental record overlaps, quantum
// erasure and discrete-time monitoring of a two-level system.
//
// The premeasurement is realised as the controlled unitary
//   U = Σ_n |n><n| ⊗ W_n,   W_n |ready> = |pointer_n>,
// so it is exactly invertible on the joint space. Environments always start
// in their ready state and are never post-selected.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "decolab/hilbert.hpp"

namespace decolab {

class PointerCoupling {
 public:
  /// One pointer per system basis state; all in the same environment space.
  PointerCoupling(StateVector env_ready, std::vector<StateVector> env_pointers);

  /// Pointers built from a Gram matrix (see gram_vectors); the ready state is
  /// the pointer of system state 0.
  static PointerCoupling from_gram(const Matrix& gram);

  std::size_t system_dim() const noexcept { return pointers_.size(); }
  std::size_t env_dim() const noexcept { return ready_.dim(); }
  const StateVector& ready() const noexcept { return ready_; }
  const StateVector& pointer(std::size_t n) const;
  /// gram(m, n) = <pointer_m | pointer_n>.
  Matrix gram() const;
  /// W_n with W_n |ready> = |pointer_n>.
  const Matrix& rotation(std::size_t n) const;

 private:
  StateVector ready_;
  std::vector<StateVector> pointers_;
  std::vector<Matrix> rotations_;
};

/// Overlap tables of a sequence of environmental records (scatterers).
class ScattererChain {
 public:
  /// Each table must be hermitian with unit diagonal and positive
  /// semidefinite; all tables share one dimension.
  explicit ScattererChain(std::vector<Matrix> overlaps);

  static ScattererChain from_couplings(std::span<const PointerCoupling> couplings);
  /// `count` identical tables with off-diagonal value `overlap` above the
  /// diagonal and its conjugate below.
  static ScattererChain uniform(std::size_t dim, std::size_t count, cplx overlap);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return overlaps_.size(); }
  const Matrix& overlap(std::size_t j) const;

 private:
  std::vector<Matrix> overlaps_;
  std::size_t dim_ = 0;
};

struct MonitoringChannel {
  double rate = 0.0;  // off-diagonal decay rate γ
  std::array<std::size_t, 2> monitored_basis{0, 1};
  double dt = 1.0;

  /// Throws PreconditionError for γ < 0, dt <= 0 or a basis pair that is not
  /// a permutation of {0, 1}.
  void validate() const;
};

/// Σ c_n φ_n ⊗ Φ_n. The result split is system.split() followed by the
/// environment factor.
StateVector ideal_premeasure(const StateVector& system,
                             const PointerCoupling& coupling);

/// Sequential premeasurement by each scatterer in turn; the result has the
/// system factors followed by one factor per scatterer.
StateVector premeasure_sequence(const StateVector& system,
                                std::span<const PointerCoupling> scatterers);

/// Applies the inverse controlled unitaries of the listed scatterers to a
/// joint state produced by premeasure_sequence. Scatterer j occupies factor
/// system_factors + j.
StateVector erase(const StateVector& joint,
                  std::span<const PointerCoupling> scatterers,
                  std::span<const std::size_t> subset,
                  std::size_t system_factors = 1);

/// Π_{j<k} <ε_j^(n) | ε_j^(m)>, the factor multiplying ρ_mn after k records.
cplx decoherence_factor(const ScattererChain& chain, std::size_t m,
                        std::size_t n, std::size_t k);

/// Unit vectors whose pairwise overlaps reproduce `gram`
/// (<v_m | v_n> = gram(m, n)). Throws on an invalid Gram matrix.
std::vector<StateVector> gram_vectors(const Matrix& gram);

/// Validates the Gram-matrix invariants; throws DimensionError or
/// InvariantError.
void validate_gram(const Matrix& gram);

/// Multiplies the off-diagonal entries of a two-level state by exp(-γ dt).
DensityMatrix monitor_step(const DensityMatrix& rho,
                           const MonitoringChannel& channel);

}  // namespace decolab
