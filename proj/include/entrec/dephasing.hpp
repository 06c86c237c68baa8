#pragma once

// Stroboscopic dephasing of qubit B by a sequence of correlated Gaussian
// phases, with per-trajectory states, seeded Monte Carlo averaging and the
// closed-form averaged coherences.
//
// Each noise step multiplies the |H_B> component by e^{i chi_k}. Starting from
// |Psi-> this gives (|HV> - e^{i phi_k}|VH>)/sqrt2 with phi_k = chi_1 + ... + chi_k,
// and after the echo flip (|HH> - e^{i(chi_1+chi_2-chi_3-...)}|VV>)/sqrt2 up to a
// global phase.

#include "entrec/qcore.hpp"

#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace entrec {

struct NoiseParams {
  double mu = 1.0;  ///< probability of repeating the previous phase
  double sigma = 0.6;  ///< rad
  double mean_phase = std::numbers::pi / 2.0;  ///< rad
  int steps = 4;
  /// Redraw Gaussian phases falling outside the retarder range [0, pi].
  bool clip_to_hardware = false;

  void validate() const;
};

struct PhaseSequence {
  std::vector<double> phases;

  /// Accumulated phase chi_1 + ... + chi_k.
  double accumulated(int k) const;
};

enum class ControlKind { uncontrolled, corrected, echoed };

enum class CorrectionVariant {
  ideal,  ///< extra compensating phase -phi_k after step k
  replace_last_step,  ///< step k itself is set to -phi_{k-1}
};

struct TrajectoryControl {
  ControlKind kind = ControlKind::uncontrolled;
  int echo_after_step = 2;
  /// 0 means "after the last step".
  int correct_after_step = 0;
  CorrectionVariant variant = CorrectionVariant::ideal;

  static TrajectoryControl uncontrolled() { return {}; }
  static TrajectoryControl echoed(int after_step = 2) {
    return {ControlKind::echoed, after_step, 0, CorrectionVariant::ideal};
  }
  static TrajectoryControl corrected(CorrectionVariant v = CorrectionVariant::ideal) {
    return {ControlKind::corrected, 2, 0, v};
  }

  int correction_step(int steps) const { return correct_after_step > 0 ? correct_after_step : steps; }
  void validate(int steps) const;
};

const char* to_string(ControlKind kind);
ControlKind control_kind_from_string(const std::string& s);

using Rng = std::mt19937_64;

/// Independent, reproducible generator for trajectory `index` under `seed`.
Rng trajectory_rng(std::uint64_t seed, std::uint64_t index);

PhaseSequence sample_sequence(const NoiseParams& params, Rng& rng);

/// Pearson correlation of (chi_k, chi_{k+1}) pooled over all sequences.
double adjacent_correlation(std::span<const PhaseSequence> sequences);

/// Net 2x2 operator applied to qubit B after k steps under `control`.
Matrix2c trajectory_operator(const PhaseSequence& seq, int k, const TrajectoryControl& control);

/// The pure state of one trajectory, starting from |Psi->.
PureState trajectory_state(const PhaseSequence& seq, int k, const TrajectoryControl& control);

struct MonteCarloOptions {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct MonteCarloAverage {
  DensityMatrix rho;
  /// Elementwise mean of |rho_ij|^2 over trajectories, for standard errors.
  Eigen::Matrix4d second_moment;
  std::size_t n_samples;

  /// Standard error of the mean of entry (i, j).
  double standard_error(int i, int j) const;
};

/// Average of U rho_in U^dag over sampled trajectory operators U = 1_A x u_B.
/// Bit-identical for a fixed (seed, n_samples) regardless of `workers`.
MonteCarloAverage monte_carlo_channel(const DensityMatrix& rho_in, const NoiseParams& params,
                                      const TrajectoryControl& control, int k,
                                      const MonteCarloOptions& opts);

/// Monte Carlo average starting from |Psi-><Psi-|.
MonteCarloAverage monte_carlo_rho(const NoiseParams& params, const TrajectoryControl& control,
                                  int k, const MonteCarloOptions& opts);

/// Phase sequences exactly as consumed by monte_carlo_channel.
std::vector<PhaseSequence> sample_sequences(const NoiseParams& params, std::size_t n,
                                            std::uint64_t seed, unsigned workers = 1);

/// Closed-form <b|rho_out(k)|c> for the uncontrolled dynamics, k in 1..4.
complex_t analytic_bc(int k, double mu, double sigma, double mean_phase);

/// Closed-form <a|rho~_out(k)|d> for the echoed dynamics, k in 3..4.
complex_t analytic_ad_echo(int k, double mu, double sigma, double mean_phase);

}  // namespace entrec
