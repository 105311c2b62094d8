#include <cmath>
#include <string>
#include <vector>

#include <omp.h>

#include "decolab/errors.hpp"
#include "decolab/rng.hpp"
#include "decolab/scenarios.hpp"

namespace decolab {
namespace {

std::vector<double> born_weights(const MeasurementChain& chain) {
  std::vector<double> w(chain.outcomes());
  for (std::size_t n = 0; n < w.size(); ++n) w[n] = std::norm(chain.amplitudes[n]);
  return w;
}

}  // namespace

void MeasurementChain::validate() const {
  if (amplitudes.empty()) throw DimensionError("measurement chain needs at least one amplitude");
  double norm = 0.0;
  for (const cplx& c : amplitudes) norm += std::norm(c);
  if (std::abs(norm - 1.0) > kNormTolerance)
    throw InvariantError("chain amplitudes normalised", std::abs(norm - 1.0));
  const std::size_t n = amplitudes.size();
  if (apparatus_dim < n || environment_dim < n || observer_dim < n)
    throw DimensionError("pointer registers need dimension ≥ " + std::to_string(n) +
                         " to hold orthonormal pointers");
}

StateVector build_chain_state(const MeasurementChain& chain, ChainStage stage) {
  chain.validate();
  const std::size_t n = chain.outcomes();
  SubsystemSplit split({n, chain.apparatus_dim, chain.environment_dim, chain.observer_dim},
                       {"system", "apparatus", "environment", "observer"});
  const auto strides = split.strides();
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(split.total_dim()));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t app = stage == ChainStage::ready ? 0 : k;
    const std::size_t env = stage == ChainStage::decoh ? k : 0;
    const std::size_t flat = k * strides[0] + app * strides[1] + env * strides[2];
    amps(static_cast<Eigen::Index>(flat)) = chain.amplitudes[k];
  }
  return StateVector(std::move(amps), std::move(split));
}

double FrequencyRecord::frequency(std::size_t n) const {
  if (n >= counts.size()) throw DimensionError("outcome index out of range");
  return runs == 0 ? 0.0 : static_cast<double>(counts[n]) / static_cast<double>(runs);
}

std::size_t sample_chain_outcome(const MeasurementChain& chain, std::uint64_t seed,
                                 std::uint64_t run) {
  chain.validate();
  const auto w = born_weights(chain);
  return sample_index(w, SplitMix64::stream(seed, run).uniform());
}

FrequencyRecord run_chain(const MeasurementChain& chain, std::uint64_t runs, std::uint64_t seed) {
  chain.validate();
  if (runs < 1) throw PreconditionError("run_chain needs N ≥ 1");
  const auto w = born_weights(chain);
  const std::size_t n = w.size();
  std::vector<std::uint64_t> counts(n, 0);
  const auto total = static_cast<std::int64_t>(runs);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(n, 0);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < total; ++r)
      ++local[sample_index(w, SplitMix64::stream(seed, static_cast<std::uint64_t>(r)).uniform())];
#pragma omp critical
    for (std::size_t k = 0; k < n; ++k) counts[k] += local[k];
  }
  return FrequencyRecord{std::move(counts), runs, seed};
}

}  // namespace decolab
