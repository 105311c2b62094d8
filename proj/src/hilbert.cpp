#include "decolab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "decolab/errors.hpp"
#include "decolab/kernels.hpp"

namespace decolab {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void require_square(const Matrix& m, const SubsystemSplit& split, const char* what) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(what) + " must be square");
  if (static_cast<std::size_t>(m.rows()) != split.total_dim())
    throw DimensionError(std::string(what) + " dimension " + std::to_string(m.rows()) +
                         " does not match split total " + std::to_string(split.total_dim()));
}

}  // namespace

// ------------------------------------------------------------ SubsystemSplit

SubsystemSplit::SubsystemSplit(std::size_t dim)
    : SubsystemSplit(std::vector<std::size_t>{dim}) {}

SubsystemSplit::SubsystemSplit(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) throw DimensionError("subsystem split needs at least one factor");
  if (labels_.empty()) labels_.assign(dims_.size(), std::string{});
  if (labels_.size() != dims_.size())
    throw DimensionError("one label per factor required");
  for (std::size_t d : dims_) {
    if (d == 0) throw DimensionError("factor dimensions must be >= 1");
    total_ *= d;
  }
}

std::size_t SubsystemSplit::dim(std::size_t factor) const {
  if (factor >= dims_.size())
    throw DimensionError("factor index " + std::to_string(factor) + " out of range");
  return dims_[factor];
}

std::vector<std::size_t> SubsystemSplit::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t f = dims_.size(); f-- > 1;) s[f - 1] = s[f] * dims_[f];
  return s;
}

SubsystemSplit SubsystemSplit::concat(const SubsystemSplit& other) const {
  auto dims = dims_;
  auto labels = labels_;
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  return SubsystemSplit(std::move(dims), std::move(labels));
}

SubsystemSplit SubsystemSplit::select(std::span<const std::size_t> factors) const {
  std::vector<std::size_t> sorted(factors.begin(), factors.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> dims;
  std::vector<std::string> labels;
  for (std::size_t f : sorted) {
    dims.push_back(dim(f));
    labels.push_back(labels_[f]);
  }
  return SubsystemSplit(std::move(dims), std::move(labels));
}

std::vector<std::size_t> SubsystemSplit::complement(std::span<const std::size_t> block) const {
  std::vector<std::size_t> rest;
  for (std::size_t f = 0; f < dims_.size(); ++f)
    if (std::find(block.begin(), block.end(), f) == block.end()) rest.push_back(f);
  return rest;
}

IndexBlocks make_index_blocks(const SubsystemSplit& split, std::span<const std::size_t> block) {
  IndexBlocks out;
  out.block_factors.assign(block.begin(), block.end());
  std::sort(out.block_factors.begin(), out.block_factors.end());
  if (std::adjacent_find(out.block_factors.begin(), out.block_factors.end()) !=
      out.block_factors.end())
    throw DimensionError("repeated factor index");
  for (std::size_t f : out.block_factors)
    if (f >= split.factors())
      throw DimensionError("factor index " + std::to_string(f) + " out of range for " +
                           std::to_string(split.factors()) + " factors");
  out.rest_factors = split.complement(out.block_factors);

  const auto strides = split.strides();
  auto offsets = [&](const std::vector<std::size_t>& factors) {
    std::vector<std::size_t> result{0};
    for (std::size_t f : factors) {
      std::vector<std::size_t> next;
      next.reserve(result.size() * split.dim(f));
      for (std::size_t base : result)
        for (std::size_t d = 0; d < split.dim(f); ++d) next.push_back(base + d * strides[f]);
      result = std::move(next);
    }
    return result;
  };
  out.block_offsets = offsets(out.block_factors);
  out.rest_offsets = offsets(out.rest_factors);
  return out;
}

// ---------------------------------------------------------------- StateVector

StateVector::StateVector(Vector amplitudes, SubsystemSplit split)
    : amplitudes_(std::move(amplitudes)), split_(std::move(split)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != split_.total_dim())
    throw DimensionError("state has " + std::to_string(amplitudes_.size()) +
                         " amplitudes but split total is " + std::to_string(split_.total_dim()));
  const double err = std::abs(amplitudes_.squaredNorm() - 1.0);
  if (err > kNormTolerance) throw InvariantError("state norm = 1", err);
}

StateVector::StateVector(Vector amplitudes)
    : StateVector(amplitudes, SubsystemSplit(static_cast<std::size_t>(amplitudes.size()))) {}

StateVector StateVector::normalized(Vector amplitudes, SubsystemSplit split) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvariantError("nonzero finite norm", n);
  amplitudes /= n;
  return StateVector(std::move(amplitudes), std::move(split));
}

StateVector StateVector::normalized(Vector amplitudes) {
  const auto n = static_cast<std::size_t>(amplitudes.size());
  return normalized(std::move(amplitudes), SubsystemSplit(n));
}

StateVector StateVector::basis(SubsystemSplit split, std::size_t index) {
  if (index >= split.total_dim()) throw DimensionError("basis index out of range");
  Vector v = Vector::Zero(idx(split.total_dim()));
  v(idx(index)) = 1.0;
  return StateVector(std::move(v), std::move(split));
}

// -------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries, SubsystemSplit split)
    : entries_(std::move(entries)), split_(std::move(split)) {
  require_square(entries_, split_, "density matrix");
  const double herm = hermiticity_error(entries_);
  if (herm > kHermitianTolerance) throw InvariantError("density matrix hermitian", herm);
  const double tr = std::abs(entries_.trace() - cplx(1.0));
  if (tr > kTraceTolerance) throw InvariantError("density matrix trace = 1", tr);
  const double lo = min_eigenvalue(entries_);
  if (lo < kPositivityFloor)
    throw InvariantError("density matrix min eigenvalue >= " + num(kPositivityFloor), lo);
}

DensityMatrix::DensityMatrix(Matrix entries)
    : DensityMatrix(entries, SubsystemSplit(static_cast<std::size_t>(entries.rows()))) {}

// ----------------------------------------------------------------- Observable

Observable::Observable(Matrix entries, SubsystemSplit split)
    : entries_(std::move(entries)), split_(std::move(split)) {
  require_square(entries_, split_, "observable");
  const double herm = hermiticity_error(entries_);
  if (herm > kHermitianTolerance) throw InvariantError("observable hermitian", herm);
}

Observable::Observable(Matrix entries)
    : Observable(entries, SubsystemSplit(static_cast<std::size_t>(entries.rows()))) {}

Observable Observable::embed(const Observable& a, const SubsystemSplit& total,
                             std::span<const std::size_t> block) {
  const IndexBlocks blocks = make_index_blocks(total, block);
  if (static_cast<std::size_t>(a.entries().rows()) != blocks.block_offsets.size())
    throw DimensionError("observable dimension does not match the block");
  const std::size_t n = total.total_dim();
  Matrix full = Matrix::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < blocks.block_offsets.size(); ++i)
    for (std::size_t j = 0; j < blocks.block_offsets.size(); ++j)
      for (std::size_t r : blocks.rest_offsets)
        full(idx(blocks.block_offsets[i] + r), idx(blocks.block_offsets[j] + r)) =
            a.entries()(idx(i), idx(j));
  return Observable(std::move(full), total);
}

// ----------------------------------------------------------------- operations

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  const Index na = a.amplitudes().size();
  const Index nb = b.amplitudes().size();
  Vector out(na * nb);
  for (Index i = 0; i < na; ++i) out.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
  return StateVector(std::move(out), a.split().concat(b.split()));
}

DensityMatrix density_of(const StateVector& psi) {
  Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(std::move(rho), psi.split());
}

double expectation(const Observable& a, const DensityMatrix& rho) {
  if (a.entries().rows() != rho.entries().rows())
    throw DimensionError("observable dimension " + std::to_string(a.entries().rows()) +
                         " does not match density matrix dimension " +
                         std::to_string(rho.entries().rows()));
  // Trace[A ρ] = Σ_ij A_ij ρ_ji without forming the product.
  const cplx value = (a.entries().array() * rho.entries().transpose().array()).sum();
  if (std::abs(value.imag()) > 1e-10) throw InvariantError("real expectation value", value.imag());
  return value.real();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DimensionError("partial trace needs at least one kept factor");
  const IndexBlocks blocks = make_index_blocks(rho.split(), keep);
  Matrix reduced = kernels::partial_trace(rho.entries(), blocks);
  // Exact hermitian symmetrisation removes summation-order asymmetry.
  reduced = (0.5 * (reduced + reduced.adjoint())).eval();
  return DensityMatrix(std::move(reduced), rho.split().select(blocks.block_factors));
}

SchmidtDecomposition schmidt(const StateVector& psi, std::span<const std::size_t> local) {
  if (local.empty()) throw DimensionError("Schmidt cut needs a nonempty local block");
  const IndexBlocks blocks = make_index_blocks(psi.split(), local);
  if (blocks.rest_factors.empty())
    throw DimensionError("Schmidt cut needs a nonempty environment block");

  const Index na = idx(blocks.block_offsets.size());
  const Index nb = idx(blocks.rest_offsets.size());
  Matrix coeff(na, nb);
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < nb; ++b)
      coeff(a, b) = psi[blocks.block_offsets[static_cast<std::size_t>(a)] +
                        blocks.rest_offsets[static_cast<std::size_t>(b)]];

  // ψ(a, b) = Σ_n s_n U(a, n) conj(V(b, n)).
  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();

  SchmidtDecomposition out;
  out.source_split = psi.split();
  out.cut = blocks.block_factors;
  const SubsystemSplit local_split = psi.split().select(blocks.block_factors);
  const SubsystemSplit env_split = psi.split().select(blocks.rest_factors);

  for (Index n = 0; n < s.size(); ++n) {
    if (s(n) <= kSchmidtDropThreshold) break;
    Vector phi = u.col(n);
    Vector env = v.col(n).conjugate();
    for (Index i = 0; i < phi.size(); ++i) {
      if (std::abs(phi(i)) > 1e-12) {
        const cplx phase = phi(i) / std::abs(phi(i));
        phi *= std::conj(phase);
        env *= phase;
        break;
      }
    }
    out.probabilities.push_back(s(n) * s(n));
    out.local_vectors.push_back(StateVector::normalized(std::move(phi), local_split));
    out.env_vectors.push_back(StateVector::normalized(std::move(env), env_split));
  }
  for (std::size_t n = 1; n < out.probabilities.size(); ++n)
    if (out.probabilities[n - 1] - out.probabilities[n] < kSchmidtDegeneracyGap)
      out.degenerate = true;
  return out;
}

StateVector reconstruct(const SchmidtDecomposition& d) {
  const IndexBlocks blocks = make_index_blocks(d.source_split, d.cut);
  Vector psi = Vector::Zero(idx(d.source_split.total_dim()));
  for (std::size_t n = 0; n < d.rank(); ++n) {
    const double w = std::sqrt(d.probabilities[n]);
    const Vector& phi = d.local_vectors[n].amplitudes();
    const Vector& env = d.env_vectors[n].amplitudes();
    for (std::size_t a = 0; a < blocks.block_offsets.size(); ++a)
      for (std::size_t b = 0; b < blocks.rest_offsets.size(); ++b)
        psi(idx(blocks.block_offsets[a] + blocks.rest_offsets[b])) += w * phi(idx(a)) * env(idx(b));
  }
  return StateVector(std::move(psi), d.source_split);
}

double entanglement_entropy(const DensityMatrix& rho) {
  const RealVector ev = spectrum(rho.entries());
  double s = 0.0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) s -= ev(i) * std::log(ev(i));
  return std::max(s, 0.0);
}

double offdiagonal_coherence(const DensityMatrix& rho) {
  const Matrix& m = rho.entries();
  double sum = 0.0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j) sum += std::abs(m(i, j));
  return sum;
}

double purity(const DensityMatrix& rho) {
  // Tr ρ² = Σ |ρ_ij|² for hermitian ρ.
  return rho.entries().squaredNorm();
}

RealVector spectrum(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  return spectrum(hermitian).minCoeff();
}

double hermiticity_error(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return std::sqrt((m - m.adjoint()).cwiseAbs2().maxCoeff());
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity of states with different dimensions");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace decolab
