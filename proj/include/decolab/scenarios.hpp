#pragma once

// Reproducible decoherence experiments built on the kinematics, premeasurement
// and localization modules.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decolab/hilbert.hpp"
#include "decolab/localization.hpp"
#include "decolab/premeasurement.hpp"
#include "decolab/trace.hpp"

namespace decolab {

// ---------------------------------------------------------------- two-slit

struct TwoSlitConfig {
  double separation = 8.0;     // d
  double packet_width = 0.5;   // position std of each packet
  double mass = GridDensityMatrix::kFrozenMass;
  double lambda = 0.05;
  double t_final = 4.0;
  double dt = 0.01;
  std::size_t grid_points = 256;
  double grid_extent = 0.0;    // 0: d + 24 packet widths
  std::size_t record_stride = 1;

  void validate() const;
};

struct TwoSlitRun {
  ObservableTrace trace;  // visibility, cross_peak_ratio, closed_form, trace
  GridDensityMatrix final_state;
  double effective_separation;  // grid distance between the packet centres
};

/// Symmetric superposition of two packets evolved under the master equation.
/// visibility = |ρ(x+, x−)| / sqrt(ρ(x+, x+) ρ(x−, x−)) at the packet centres,
/// cross_peak_ratio = |ρ(x+, x−)(t)| / |ρ(x+, x−)(0)|,
/// closed_form = exp(−Λ d² t) with d the effective separation.
TwoSlitRun run_two_slit(const TwoSlitConfig& cfg);
ObservableTrace two_slit_visibility(const TwoSlitConfig& cfg);

// ------------------------------------------------------------------ chiral

struct ChiralConfig {
  double omega = 1.0;   // tunnelling (parity splitting) angular frequency
  double gamma = 0.0;   // monitoring strength of the chirality
  double t_final = 10.0;
  double dt = 1e-3;
  /// Initial state in the chirality basis (|L>, |R>); default |L>.
  std::optional<Vector> initial;
  std::size_t record_stride = 1;

  void validate() const;
};

/// Coherence |ρ_LR| decays at rate 2γ: γ is the strength of a σ_z
/// measurement channel, so the monitor_step rate is 2γ. In the Zeno limit the
/// chirality then relaxes at ω²/(2γ).
inline constexpr double kChiralChannelRatePerGamma = 2.0;

struct ChiralRun {
  ObservableTrace trace;  // P_L, coherence, parity_coherence, purity, trace
  DensityMatrix final_state;
};

/// H = (ω/2) σ_x in the chirality basis; each step is
/// monitor(dt/2) · exp(−iH dt) · monitor(dt/2).
ChiralRun run_chiral(const ChiralConfig& cfg);
ObservableTrace chiral_dynamics(const ChiralConfig& cfg);

enum class Regime { unitary, master, zeno };
std::string_view to_string(Regime regime);

struct RegimeThresholds {
  double unitary_below = 0.1;  // γ < 0.1 ω
  double zeno_above = 10.0;    // γ > 10 ω
};

/// ω = 0 counts as zeno for any γ > 0 (nothing to freeze but nothing moves).
Regime classify_regime(const ChiralConfig& cfg, const RegimeThresholds& thresholds = {});

/// Least-squares rate of ln(P_L − 1/2) over [t_begin, t_end].
double chiral_relaxation_rate(const ObservableTrace& trace, double t_begin, double t_end);
/// First time P_L falls to `level`; NaN if it never does.
double chiral_relaxation_time(const ObservableTrace& trace, double level = 0.75);

// ------------------------------------------------------------------ charge

struct ChargeModel {
  std::vector<cplx> amplitudes;  // c_q
  std::size_t shells = 0;        // R
  Matrix per_shell_overlap;      // <Ψ_q | Ψ_q'> for one shell

  void validate() const;
  /// Overlap table with `overlap` above the diagonal, conjugate below.
  static Matrix uniform_overlap(std::size_t charges, cplx overlap);
};

/// ρ_qq' = c_q c_q'* <Ψ_q'|Ψ_q>^R; diagonal set to |c_q|² exactly.
DensityMatrix charge_reduced_density(const ChargeModel& model);

/// Same matrix from the joint state: R sequential premeasurements with shell
/// pointer states realising the overlap table, then a partial trace.
DensityMatrix charge_reduced_density_joint(const ChargeModel& model);

// ------------------------------------------------------------------- decay

struct DecayConfig {
  std::size_t n_modes = 201;
  double mode_spacing = 0.1;   // Δω
  double coupling = 0.125;     // g
  double detuning = 0.0;       // offset of the mode comb from the level
  /// Explicit mode frequencies; when set they replace the uniform comb.
  std::vector<double> mode_frequencies;
  bool monitored = false;
  double monitor_rate = 0.0;   // γ_d, dephasing of excited/decayed coherences
  double t_final = 0.0;        // 0: 1.5 · 2π/Δω
  double dt = 0.05;
  std::size_t record_stride = 1;

  void validate() const;
  double final_time() const;
  std::vector<double> frequencies() const;
};

/// Golden-rule rate 2π g² / Δω.
double golden_rule_rate(const DecayConfig& cfg);
/// Σ_k 2 g² γ_d / (γ_d² + ω_k²): the monitored (Lorentzian-filtered) rate.
double monitored_rate(const DecayConfig& cfg);

struct DecayRun {
  ObservableTrace trace;  // survival, norm (unmonitored) or trace, coherence
  double norm_drift = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

/// Unmonitored: exact unitary evolution by diagonalisation. Monitored:
/// density matrix stepping with the excited/decayed dephasing applied every
/// step (Strang split against the coupling rotation).
DecayRun run_decay(const DecayConfig& cfg);
ObservableTrace decay_survival(const DecayConfig& cfg);

/// 2π/Δω; nullopt for non-uniform mode spacing.
std::optional<double> revival_time(const DecayConfig& cfg);

// ------------------------------------------------------- measurement chain

struct MeasurementChain {
  std::vector<cplx> amplitudes;  // c_n
  std::size_t apparatus_dim = 2;
  std::size_t environment_dim = 2;
  std::size_t observer_dim = 2;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t outcomes() const noexcept { return amplitudes.size(); }
};

/// Chain stages. Pointer families are the computational basis vectors |n>
/// of each register, with |0> as the ready state.
enum class ChainStage { ready, meas, decoh };

/// Joint state on system ⊗ apparatus ⊗ environment ⊗ observer.
StateVector build_chain_state(const MeasurementChain& chain, ChainStage stage);

struct FrequencyRecord {
  std::vector<std::uint64_t> counts;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;

  double frequency(std::size_t n) const;
  bool operator==(const FrequencyRecord&) const = default;
};

/// Samples the observed outcome n₀ of each run from |c_n|² with the
/// substream (seed, run index); independent of thread scheduling.
FrequencyRecord run_chain(const MeasurementChain& chain, std::uint64_t runs,
                          std::uint64_t seed);

/// Outcome of the single run `run` under `seed`.
std::size_t sample_chain_outcome(const MeasurementChain& chain, std::uint64_t seed,
                                 std::uint64_t run);

}  // namespace decolab
