#pragma once

// Measurement-conditioned recovery with a path qubit O acting as environment.
//
// Register order is [A,B,O] with O in {u=0, d=1}. The environment is rotated
// by R_O(p) = sqrt(1-p) sz + sqrt(p) sx, coupled to B by the CNOT
// G_BO = 1 x |u><u| + sx_B x |d><d|, rotated by R'_O(theta) and read out in
// {u, d}. On outcome d the correction sx is applied to B.

#include "entrec/entanglement.hpp"

#include <optional>
#include <vector>

namespace entrec {

struct ClosedLoopParams {
  double p = 0.0;
  double theta = 0.0;
  double eta = 1.0;
  std::optional<double> p_prime;

  /// p = p' / (1 + p'); rejects p' < 0.
  static ClosedLoopParams from_p_prime(double p_prime, double theta = 0.0, double eta = 1.0);
  void validate() const;
};

/// p' = p / (1 - p); infinite at p = 1.
double p_prime_from_p(double p);
double p_from_p_prime(double p_prime);

enum class OutcomeLabel { theta_u, theta_d };

const char* to_string(OutcomeLabel label);

struct MeasurementOutcome {
  OutcomeLabel label;
  double probability;
  PureState post_state;  ///< normalized state of [A,B]
};

struct ClosedLoopOutput {
  DensityMatrix rho;
  double concurrence;  ///< closed form
};

namespace gates {
/// R_O(p), acting on O.
Matrix2c environment_rotation(double p);
/// R'_O(theta) = exp(-i theta sy), acting on O.
Matrix2c measurement_rotation(double theta);
/// G_BO on register [A,B,O].
MatrixXc cnot_bo();
}  // namespace gates

/// Measurement kets |theta_k> = R'^dag |k>, k in {u, d}.
PureState measurement_ket(OutcomeLabel label, double theta);

/// Applies R_O(p) then G_BO to |Psi->|u>.
PureState state_after_interaction(double p);

/// Tr_O of the interaction applied to rho_AB x |u><u|.
DensityMatrix interaction_channel(const DensityMatrix& rho_ab, double p);

/// Interaction, measurement of O in the theta basis and the conditional
/// correction, averaged over outcomes.
DensityMatrix controlled_channel(const DensityMatrix& rho_ab, double p, double theta);

/// 1/2 max{0, 2 eta |1 - 2p| - 1 + eta}.
double uncontrolled_concurrence_closed_form(double p, double eta);
/// 1/2 max{0, eta (1 + 2 |cos 2 theta|) - 1}.
double controlled_concurrence_closed_form(double theta, double eta);

ClosedLoopOutput uncontrolled_output(double p, double eta);
ClosedLoopOutput controlled_output(double p, double theta, double eta);

/// Outcomes of measuring O after the interaction (input |Psi->).
std::vector<MeasurementOutcome> measure_environment(double p, double theta);

/// Outcomes after the conditional correction, i.e. the ensemble Q'.
std::vector<MeasurementOutcome> corrected_outcomes(double p, double theta);

PureStateEnsemble to_ensemble(const std::vector<MeasurementOutcome>& outcomes);

struct AssistanceResult {
  double best_theta;
  double best_eof;
};

/// Maximizes the ensemble-average E_f over a theta grid on [0, pi/2].
/// Ties go to the smaller theta.
AssistanceResult entanglement_of_assistance_check(double p, std::size_t grid_points = 181);

}  // namespace entrec
