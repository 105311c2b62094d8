#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "decolab/errors.hpp"
#include "decolab/premeasurement.hpp"
#include "oracles.hpp"

using namespace decolab;

namespace {

const double r2 = 1.0 / std::numbers::sqrt2;

StateVector qubit(cplx a, cplx b) {
  Vector v(2);
  v << a, b;
  return StateVector::normalized(v);
}

/// Two pointers in C² with <p1|p0> = overlap (real), ready state = p0.
PointerCoupling overlap_coupling(double overlap) {
  const StateVector p0 = qubit(1.0, 0.0);
  const StateVector p1 = qubit(overlap, std::sqrt(1.0 - overlap * overlap));
  return PointerCoupling(p0, {p0, p1});
}

PointerCoupling random_coupling(std::mt19937_64& rng, std::size_t sys, std::size_t env) {
  std::vector<StateVector> pointers;
  for (std::size_t n = 0; n < sys; ++n) pointers.emplace_back(oracle::random_state(rng, env));
  return PointerCoupling(StateVector(oracle::random_state(rng, env)), std::move(pointers));
}

}  // namespace

TEST_CASE("rotations map the ready state onto each pointer and are unitary") {
  std::mt19937_64 rng(21);
  const auto c = random_coupling(rng, 3, 4);
  for (std::size_t n = 0; n < 3; ++n) {
    const Matrix& w = c.rotation(n);
    CHECK(oracle::max_abs(Matrix(w * w.adjoint() - Matrix::Identity(4, 4))) < 1e-13);
    CHECK(oracle::max_abs(Vector(w * c.ready().amplitudes() - c.pointer(n).amplitudes())) < 1e-13);
  }
}

TEST_CASE("ideal premeasurement examples") {
  const std::size_t sys[] = {0};
  const auto c = overlap_coupling(0.6);
  const auto prod = ideal_premeasure(qubit(1.0, 0.0), c);
  CHECK(entanglement_entropy(partial_trace(density_of(prod), sys)) < 1e-12);

  const auto orth = ideal_premeasure(qubit(r2, r2), overlap_coupling(0.0));
  const auto red = partial_trace(density_of(orth), sys);
  CHECK(oracle::max_abs(red.entries() - 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  CHECK(offdiagonal_coherence(red) < 1e-15);

  const auto part = partial_trace(density_of(ideal_premeasure(qubit(r2, r2), c)), sys);
  CHECK(std::abs(part(0, 1) - 0.3) < 1e-14);

  // Joint amplitudes match Σ c_n |n> ⊗ |pointer_n> built by hand.
  Vector expected = oracle::kron(Vector::Unit(2, 0), c.pointer(0).amplitudes()) * r2 +
                    oracle::kron(Vector::Unit(2, 1), c.pointer(1).amplitudes()) * r2;
  CHECK(oracle::max_abs(Vector(ideal_premeasure(qubit(r2, r2), c).amplitudes() - expected)) < 1e-15);

  std::mt19937_64 rng(20);
  CHECK_THROWS_AS(ideal_premeasure(StateVector(oracle::random_state(rng, 3)), c), DimensionError);
}

TEST_CASE("reduced matrix is diagonal iff every pointer overlap vanishes") {
  std::mt19937_64 rng(22);
  const std::size_t sys[] = {0};
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector psi(oracle::random_state(rng, 3));
    std::vector<StateVector> orth;
    for (std::size_t n = 0; n < 3; ++n) orth.push_back(StateVector::basis(SubsystemSplit(3), n));
    const PointerCoupling diag(orth[0], orth);
    CHECK(offdiagonal_coherence(partial_trace(density_of(ideal_premeasure(psi, diag)), sys)) < 1e-10);
    const auto c = random_coupling(rng, 3, 3);
    CHECK(offdiagonal_coherence(partial_trace(density_of(ideal_premeasure(psi, c)), sys)) > 1e-10);
  }
}

TEST_CASE("decoherence factor examples") {
  const auto chain = ScattererChain::uniform(2, 10, 0.9);
  for (std::size_t k = 0; k <= 10; ++k) CHECK(decoherence_factor(chain, 1, 1, k) == cplx(1.0));
  CHECK(std::abs(decoherence_factor(chain, 0, 1, 10) - std::pow(0.9, 10)) < 1e-15);
  CHECK(std::abs(std::pow(0.9, 10) - 0.34868) < 1e-5);
  CHECK_THROWS_AS(decoherence_factor(chain, 0, 2, 1), DimensionError);
  CHECK_THROWS_AS(decoherence_factor(chain, 0, 1, 11), DimensionError);
}

TEST_CASE("decoherence factor matches the joint-state oracle for complex overlaps") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PointerCoupling> cs;
    for (int j = 0; j < 3; ++j) cs.push_back(random_coupling(rng, 2, 3));
    const StateVector psi(oracle::random_state(rng, 2));
    const auto joint = premeasure_sequence(psi, cs);
    const Matrix red = oracle::partial_trace(density_of(joint).entries(), joint.split().dims(), {0});
    const auto chain = ScattererChain::from_couplings(cs);
    const cplx expected = psi[0] * std::conj(psi[1]) * decoherence_factor(chain, 0, 1, 3);
    CHECK(std::abs(red(0, 1) - expected) < 1e-12);
    double prev = 1.0;
    for (std::size_t k = 0; k <= 3; ++k) {
      const double mag = std::abs(decoherence_factor(chain, 0, 1, k));
      CHECK(mag <= prev + 1e-15);
      prev = mag;
    }
  }
}

TEST_CASE("erase examples") {
  const std::vector<PointerCoupling> cs(3, overlap_coupling(0.8));
  const StateVector psi = qubit(r2, r2);
  const auto joint = premeasure_sequence(psi, cs);
  const std::size_t all[] = {0, 1, 2};
  const auto restored = erase(joint, cs, all);
  StateVector expected = psi;
  for (const auto& c : cs) expected = tensor_product(expected, c.ready());
  CHECK(std::abs(fidelity(restored, expected) - 1.0) < 1e-12);

  const std::size_t sys[] = {0};
  const double before = std::abs(partial_trace(density_of(joint), sys)(0, 1));
  const auto none = erase(joint, cs, std::span<const std::size_t>{});
  CHECK(std::abs(std::abs(partial_trace(density_of(none), sys)(0, 1)) - before) < 1e-15);

  const std::size_t two[] = {0, 2};
  const double after = std::abs(partial_trace(density_of(erase(joint, cs, two)), sys)(0, 1));
  CHECK(std::abs(after / 0.5 - 0.8) < 1e-12);

  const std::size_t bad[] = {3};
  CHECK_THROWS_AS(erase(joint, cs, bad), DimensionError);
}

TEST_CASE("gram vectors realise the requested overlap table") {
  Matrix g(3, 3);
  g << 1.0, cplx(0.3, 0.2), 0.1, cplx(0.3, -0.2), 1.0, cplx(0.0, 0.4), 0.1, cplx(0.0, -0.4), 1.0;
  const auto c = PointerCoupling::from_gram(g);
  CHECK(oracle::max_abs(Matrix(c.gram() - g)) < 1e-13);
  Matrix bad = g;
  bad(0, 1) = 1.5;
  bad(1, 0) = 1.5;
  CHECK_THROWS_AS(validate_gram(bad), InvariantError);
}

TEST_CASE("monitor step examples") {
  Matrix d(2, 2);
  d << 0.3, 0.0, 0.0, 0.7;
  const auto same = monitor_step(DensityMatrix(d), {1.0, {0, 1}, 0.1});
  CHECK(oracle::max_abs(Matrix(same.entries() - d)) == 0.0);

  Matrix h(2, 2);
  h << 0.5, 0.5, 0.5, 0.5;
  const auto q = monitor_step(DensityMatrix(h), {std::numbers::ln2, {0, 1}, 1.0});
  CHECK(std::abs(q(0, 1) - 0.25) < 1e-15);

  DensityMatrix rho(h);
  for (int k = 0; k < 100; ++k) rho = monitor_step(rho, {0.01, {1, 0}, 1.0});
  CHECK(std::abs(rho(0, 1) - 0.5 * std::exp(-1.0)) < 1e-12);
  CHECK(rho(0, 0) == cplx(0.5));

  // Composition is multiplicative in γ dt and order independent.
  const auto ab = monitor_step(monitor_step(DensityMatrix(h), {0.3, {0, 1}, 1.0}), {0.5, {0, 1}, 1.0});
  const auto ba = monitor_step(monitor_step(DensityMatrix(h), {0.5, {0, 1}, 1.0}), {0.3, {0, 1}, 1.0});
  const auto one = monitor_step(DensityMatrix(h), {0.8, {0, 1}, 1.0});
  CHECK(std::abs(ab(0, 1) - ba(0, 1)) < 1e-16);
  CHECK(std::abs(ab(0, 1) - one(0, 1)) < 1e-15);

  CHECK_THROWS_AS(monitor_step(DensityMatrix(Matrix::Identity(3, 3) / 3.0), {1.0, {0, 1}, 1.0}),
                  DimensionError);
  CHECK_THROWS_AS(monitor_step(DensityMatrix(h), {-1.0, {0, 1}, 1.0}), PreconditionError);
  CHECK_THROWS_AS(monitor_step(DensityMatrix(h), {1.0, {0, 0}, 1.0}), PreconditionError);
}
