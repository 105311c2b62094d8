#include "decolab/rng.hpp"

#include "decolab/errors.hpp"

namespace decolab {

std::size_t sample_index(std::span<const double> weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw PreconditionError("sampling weights must have a positive sum");
  const double target = u * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t n = 0; n < weights.size(); ++n) {
    if (weights[n] <= 0.0) continue;
    cumulative += weights[n];
    last_positive = n;
    if (target < cumulative) return n;
  }
  return last_positive;
}

}  // namespace decolab
