#include "decolab/premeasurement.hpp"

#include <cmath>
#include <string>

#include "decolab/errors.hpp"

namespace decolab {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

/// Unitary W with W a = b for unit vectors a, b: a phase times a Householder
/// reflection in span{a, b}.
Matrix rotation_between(const Vector& a, const Vector& b) {
  const Index n = a.size();
  const cplx overlap = a.dot(b);  // <a|b>
  const cplx phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : cplx(1.0);
  const Vector aligned = std::conj(phase) * b;  // <a|aligned> real, >= 0
  const Vector v = a - aligned;
  const double vv = v.squaredNorm();
  Matrix w = Matrix::Identity(n, n);
  if (vv > 1e-28) w -= (2.0 / vv) * v * v.adjoint();
  return phase * w;
}

/// Applies W_c (or W_c^dagger) on `target` conditioned on the joint index c of
/// the factors [0, control_factors).
void apply_controlled(Vector& amps, const SubsystemSplit& split, std::size_t control_factors,
                      std::size_t target, const PointerCoupling& coupling, bool inverse) {
  const auto& dims = split.dims();
  const auto strides = split.strides();
  const std::size_t dt = dims[target];
  const std::size_t st = strides[target];
  Vector line(idx(dt));
  for (std::size_t flat = 0; flat < split.total_dim(); ++flat) {
    if ((flat / st) % dt != 0) continue;
    std::size_t c = 0;
    for (std::size_t f = 0; f < control_factors; ++f) c = c * dims[f] + (flat / strides[f]) % dims[f];
    const Matrix& w = coupling.rotation(c);
    for (std::size_t t = 0; t < dt; ++t) line(idx(t)) = amps(idx(flat + t * st));
    line = inverse ? (w.adjoint() * line).eval() : (w * line).eval();
    for (std::size_t t = 0; t < dt; ++t) amps(idx(flat + t * st)) = line(idx(t));
  }
}

std::size_t system_block_dim(const SubsystemSplit& split, std::size_t system_factors) {
  std::size_t d = 1;
  for (std::size_t f = 0; f < system_factors; ++f) d *= split.dim(f);
  return d;
}

}  // namespace

// ------------------------------------------------------------ PointerCoupling

PointerCoupling::PointerCoupling(StateVector env_ready, std::vector<StateVector> env_pointers)
    : ready_(std::move(env_ready)), pointers_(std::move(env_pointers)) {
  if (pointers_.empty()) throw DimensionError("pointer coupling needs at least one pointer");
  for (const auto& p : pointers_) {
    if (p.dim() != ready_.dim())
      throw DimensionError("pointer state dimension " + std::to_string(p.dim()) +
                           " differs from ready state dimension " + std::to_string(ready_.dim()));
    rotations_.push_back(rotation_between(ready_.amplitudes(), p.amplitudes()));
  }
}

PointerCoupling PointerCoupling::from_gram(const Matrix& gram) {
  auto pointers = gram_vectors(gram);
  StateVector ready = pointers.front();
  return PointerCoupling(std::move(ready), std::move(pointers));
}

const StateVector& PointerCoupling::pointer(std::size_t n) const {
  if (n >= pointers_.size()) throw DimensionError("pointer index out of range");
  return pointers_[n];
}

const Matrix& PointerCoupling::rotation(std::size_t n) const {
  if (n >= rotations_.size()) throw DimensionError("pointer index out of range");
  return rotations_[n];
}

Matrix PointerCoupling::gram() const {
  const std::size_t d = pointers_.size();
  Matrix g(idx(d), idx(d));
  for (std::size_t m = 0; m < d; ++m)
    for (std::size_t n = 0; n < d; ++n)
      g(idx(m), idx(n)) = pointers_[m].amplitudes().dot(pointers_[n].amplitudes());
  return g;
}

// ------------------------------------------------------------- ScattererChain

ScattererChain::ScattererChain(std::vector<Matrix> overlaps) : overlaps_(std::move(overlaps)) {
  for (const auto& g : overlaps_) {
    validate_gram(g);
    if (dim_ == 0) dim_ = static_cast<std::size_t>(g.rows());
    if (static_cast<std::size_t>(g.rows()) != dim_)
      throw DimensionError("all overlap tables of a chain must share one dimension");
  }
}

ScattererChain ScattererChain::from_couplings(std::span<const PointerCoupling> couplings) {
  std::vector<Matrix> tables;
  for (const auto& c : couplings) tables.push_back(c.gram());
  return ScattererChain(std::move(tables));
}

ScattererChain ScattererChain::uniform(std::size_t dim, std::size_t count, cplx overlap) {
  Matrix g = Matrix::Identity(idx(dim), idx(dim));
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a + 1; b < dim; ++b) {
      g(idx(a), idx(b)) = overlap;
      g(idx(b), idx(a)) = std::conj(overlap);
    }
  return ScattererChain(std::vector<Matrix>(count, g));
}

const Matrix& ScattererChain::overlap(std::size_t j) const {
  if (j >= overlaps_.size()) throw DimensionError("scatterer index out of range");
  return overlaps_[j];
}

void MonitoringChannel::validate() const {
  if (!(rate >= 0.0)) throw PreconditionError("monitoring rate must satisfy γ ≥ 0");
  if (!(dt > 0.0)) throw PreconditionError("monitoring step must satisfy dt > 0");
  const bool ok = (monitored_basis[0] == 0 && monitored_basis[1] == 1) ||
                  (monitored_basis[0] == 1 && monitored_basis[1] == 0);
  if (!ok) throw PreconditionError("monitored basis must be a permutation of {0, 1}");
}

// ----------------------------------------------------------------- operations

StateVector premeasure_sequence(const StateVector& system,
                                std::span<const PointerCoupling> scatterers) {
  const std::size_t system_factors = system.split().factors();
  Vector amps = system.amplitudes();
  SubsystemSplit split = system.split();
  for (const auto& coupling : scatterers) {
    if (coupling.system_dim() != system.dim())
      throw DimensionError("coupling expects system dimension " +
                           std::to_string(coupling.system_dim()) + ", state has " +
                           std::to_string(system.dim()));
    const Vector& ready = coupling.ready().amplitudes();
    Vector joint(amps.size() * ready.size());
    for (Index i = 0; i < amps.size(); ++i) joint.segment(i * ready.size(), ready.size()) = amps(i) * ready;
    amps = std::move(joint);
    split = split.concat(coupling.ready().split());
    apply_controlled(amps, split, system_factors, split.factors() - 1, coupling, false);
  }
  return StateVector(std::move(amps), std::move(split));
}

StateVector ideal_premeasure(const StateVector& system, const PointerCoupling& coupling) {
  return premeasure_sequence(system, std::span<const PointerCoupling>(&coupling, 1));
}

StateVector erase(const StateVector& joint, std::span<const PointerCoupling> scatterers,
                  std::span<const std::size_t> subset, std::size_t system_factors) {
  const SubsystemSplit& split = joint.split();
  if (split.factors() != system_factors + scatterers.size())
    throw DimensionError("joint state has " + std::to_string(split.factors()) +
                         " factors, expected " + std::to_string(system_factors) + " + " +
                         std::to_string(scatterers.size()));
  const std::size_t sys_dim = system_block_dim(split, system_factors);
  for (std::size_t j : subset) {
    if (j >= scatterers.size())
      throw DimensionError("scatterer " + std::to_string(j) + " is not in the chain of " +
                           std::to_string(scatterers.size()));
    if (scatterers[j].system_dim() != sys_dim ||
        scatterers[j].env_dim() != split.dim(system_factors + j))
      throw DimensionError("scatterer " + std::to_string(j) + " does not match the joint state");
  }
  Vector amps = joint.amplitudes();
  for (std::size_t j : subset)
    apply_controlled(amps, split, system_factors, system_factors + j, scatterers[j], true);
  return StateVector(std::move(amps), split);
}

cplx decoherence_factor(const ScattererChain& chain, std::size_t m, std::size_t n, std::size_t k) {
  if (m >= chain.dim() || n >= chain.dim())
    throw DimensionError("basis index out of range for a chain of dimension " +
                         std::to_string(chain.dim()));
  if (k > chain.size())
    throw DimensionError("k = " + std::to_string(k) + " exceeds the " +
                         std::to_string(chain.size()) + " scatterers");
  cplx factor{1.0, 0.0};
  if (m == n) return factor;
  for (std::size_t j = 0; j < k; ++j) factor *= chain.overlap(j)(idx(n), idx(m));
  return factor;
}

void validate_gram(const Matrix& gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0)
    throw DimensionError("overlap table must be square and nonempty");
  const double herm = hermiticity_error(gram);
  if (herm > kHermitianTolerance) throw InvariantError("overlap table hermitian", herm);
  for (Index i = 0; i < gram.rows(); ++i) {
    const double d = std::abs(gram(i, i) - cplx(1.0));
    if (d > kNormTolerance) throw InvariantError("overlap table unit diagonal", d);
  }
  const double big = gram.cwiseAbs().maxCoeff();
  if (big > 1.0 + kNormTolerance) throw InvariantError("overlap magnitude <= 1", big);
  const double lo = min_eigenvalue(gram);
  if (lo < kPositivityFloor) throw InvariantError("overlap table positive semidefinite", lo);
}

std::vector<StateVector> gram_vectors(const Matrix& gram) {
  validate_gram(gram);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
  const RealVector lam = solver.eigenvalues().cwiseMax(0.0);
  const Matrix factor = lam.cwiseSqrt().asDiagonal() * solver.eigenvectors().adjoint();
  std::vector<StateVector> out;
  for (Index q = 0; q < gram.cols(); ++q) out.push_back(StateVector::normalized(factor.col(q)));
  return out;
}

DensityMatrix monitor_step(const DensityMatrix& rho, const MonitoringChannel& channel) {
  channel.validate();
  if (rho.dim() != 2)
    throw DimensionError("monitor_step needs a two-level state, got dimension " +
                         std::to_string(rho.dim()));
  Matrix m = rho.entries();
  const double factor = std::exp(-channel.rate * channel.dt);
  m(0, 1) *= factor;
  m(1, 0) *= factor;
  return DensityMatrix(std::move(m), rho.split());
}

}  // namespace decolab
