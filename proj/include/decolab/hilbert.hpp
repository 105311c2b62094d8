#pragma once

// Finite-dimensional kinematics on tensor-factored Hilbert spaces.
//
// Factor order convention: in a split with dims (d0, d1, ..., dk) the flat
// index of the product basis state |i0 i1 ... ik> is row-major, i.e. factor 0
// is the most significant digit. tensor_product(a, b) therefore places the
// factors of `a` before those of `b`.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "decolab/types.hpp"

namespace decolab {

class SubsystemSplit {
 public:
  /// A single factor of dimension `dim`.
  explicit SubsystemSplit(std::size_t dim);
  explicit SubsystemSplit(std::vector<std::size_t> dims,
                          std::vector<std::string> labels = {});

  std::size_t factors() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t factor) const;
  std::size_t total_dim() const noexcept { return total_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Row-major strides, factor 0 slowest.
  std::vector<std::size_t> strides() const;

  SubsystemSplit concat(const SubsystemSplit& other) const;
  /// Sub-split made of the listed factors, in ascending factor order.
  SubsystemSplit select(std::span<const std::size_t> factors) const;
  /// Factors not listed in `block`, ascending.
  std::vector<std::size_t> complement(std::span<const std::size_t> block) const;

  bool operator==(const SubsystemSplit&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
  std::size_t total_ = 1;
};

/// Additive decomposition of flat indices with respect to a block of factors:
/// flat = block_offsets[a] + rest_offsets[b], where `a` enumerates the block
/// (mixed radix over the block factors in ascending order) and `b` the rest.
struct IndexBlocks {
  std::vector<std::size_t> block_factors;
  std::vector<std::size_t> rest_factors;
  std::vector<std::size_t> block_offsets;
  std::vector<std::size_t> rest_offsets;
};

/// Throws DimensionError on an out-of-range or repeated factor index.
IndexBlocks make_index_blocks(const SubsystemSplit& split,
                              std::span<const std::size_t> block);

class StateVector {
 public:
  /// Validates the unit norm to within kNormTolerance.
  StateVector(Vector amplitudes, SubsystemSplit split);
  /// Single-factor convenience.
  explicit StateVector(Vector amplitudes);

  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static StateVector normalized(Vector amplitudes, SubsystemSplit split);
  static StateVector normalized(Vector amplitudes);
  static StateVector basis(SubsystemSplit split, std::size_t index);

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  const SubsystemSplit& split() const noexcept { return split_; }
  std::size_t dim() const noexcept { return split_.total_dim(); }
  cplx operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  Vector amplitudes_;
  SubsystemSplit split_;
};

class DensityMatrix {
 public:
  /// Validates hermiticity and unit trace (1e-12) and positivity (min
  /// eigenvalue >= -1e-10).
  DensityMatrix(Matrix entries, SubsystemSplit split);
  explicit DensityMatrix(Matrix entries);

  const Matrix& entries() const noexcept { return entries_; }
  const SubsystemSplit& split() const noexcept { return split_; }
  std::size_t dim() const noexcept { return split_.total_dim(); }
  cplx operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Matrix entries_;
  SubsystemSplit split_;
};

class Observable {
 public:
  Observable(Matrix entries, SubsystemSplit split);
  explicit Observable(Matrix entries);

  /// A_block ⊗ I_rest on `total`, with `a` acting on the listed factors.
  static Observable embed(const Observable& a, const SubsystemSplit& total,
                          std::span<const std::size_t> block);

  const Matrix& entries() const noexcept { return entries_; }
  const SubsystemSplit& split() const noexcept { return split_; }

 private:
  Matrix entries_;
  SubsystemSplit split_;
};

struct SchmidtDecomposition {
  std::vector<double> probabilities;  // nonincreasing
  std::vector<StateVector> local_vectors;
  std::vector<StateVector> env_vectors;
  /// Two retained probabilities closer than kSchmidtDegeneracyGap: the
  /// vectors are then one valid choice among many.
  bool degenerate = false;
  SubsystemSplit source_split{1};
  std::vector<std::size_t> cut;

  std::size_t rank() const noexcept { return probabilities.size(); }
};

inline constexpr double kSchmidtDegeneracyGap = 1e-8;
/// Singular values at or below this are dropped from the decomposition.
inline constexpr double kSchmidtDropThreshold = 1e-12;

StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix density_of(const StateVector& psi);

/// Re Trace[A ρ]. Throws DimensionError on mismatch and InvariantError if the
/// discarded imaginary part exceeds 1e-10.
double expectation(const Observable& a, const DensityMatrix& rho);

/// Traces out every factor not listed in `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::size_t> keep);

/// Schmidt form across the cut `local` | rest. Phase convention: the first
/// component of each local vector with magnitude above 1e-12 is real positive.
SchmidtDecomposition schmidt(const StateVector& psi,
                             std::span<const std::size_t> local);
StateVector reconstruct(const SchmidtDecomposition& decomposition);

/// -Σ λ ln λ over the spectrum, natural log, 0 ln 0 = 0.
double entanglement_entropy(const DensityMatrix& rho);
/// Σ_{m≠n} |ρ_mn| in the stored basis.
double offdiagonal_coherence(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);
/// Ascending eigenvalues of a hermitian matrix.
RealVector spectrum(const Matrix& hermitian);
double min_eigenvalue(const Matrix& hermitian);
double hermiticity_error(const Matrix& m);
/// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace decolab
