#include <cmath>
#include <string>
#include <vector>

#include "decolab/errors.hpp"
#include "decolab/scenarios.hpp"

namespace decolab {
namespace {

Vector amplitude_vector(const std::vector<cplx>& c) {
  Vector v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t q = 0; q < c.size(); ++q) v(static_cast<Eigen::Index>(q)) = c[q];
  return v;
}

}  // namespace

void ChargeModel::validate() const {
  if (amplitudes.empty()) throw DimensionError("charge model needs at least one amplitude");
  const double norm = amplitude_vector(amplitudes).squaredNorm();
  if (std::abs(norm - 1.0) > kNormTolerance)
    throw InvariantError("charge amplitudes normalised", std::abs(norm - 1.0));
  if (static_cast<std::size_t>(per_shell_overlap.rows()) != amplitudes.size())
    throw DimensionError("overlap table must be " + std::to_string(amplitudes.size()) + " square");
  validate_gram(per_shell_overlap);
}

Matrix ChargeModel::uniform_overlap(std::size_t charges, cplx overlap) {
  return ScattererChain::uniform(charges, 1, overlap).overlap(0);
}

DensityMatrix charge_reduced_density(const ChargeModel& model) {
  model.validate();
  const auto n = static_cast<Eigen::Index>(model.amplitudes.size());
  Matrix rho(n, n);
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < n; ++p) {
      const cplx cc = model.amplitudes[static_cast<std::size_t>(q)] *
                      std::conj(model.amplitudes[static_cast<std::size_t>(p)]);
      if (p == q) {
        rho(q, q) = std::norm(model.amplitudes[static_cast<std::size_t>(q)]);
      } else {
        const cplx g = model.per_shell_overlap(p, q);
        cplx factor{1.0, 0.0};
        for (std::size_t s = 0; s < model.shells; ++s) factor *= g;
        rho(q, p) = cc * factor;
      }
    }
  return DensityMatrix(std::move(rho));
}

DensityMatrix charge_reduced_density_joint(const ChargeModel& model) {
  model.validate();
  const std::size_t d = model.amplitudes.size();
  double total = static_cast<double>(d);
  for (std::size_t r = 0; r < model.shells; ++r) total *= static_cast<double>(d);
  if (total > static_cast<double>(1u << 24))
    throw PreconditionError("joint charge state of dimension d^(R+1) exceeds 2^24");
  const std::vector<PointerCoupling> shells(model.shells,
                                            PointerCoupling::from_gram(model.per_shell_overlap));
  const StateVector joint =
      premeasure_sequence(StateVector(amplitude_vector(model.amplitudes)), shells);
  const std::size_t keep[] = {0};
  return partial_trace(density_of(joint), keep);
}

}  // namespace decolab
