#include "entrec/closedloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace entrec {

namespace {

constexpr double kZeroProbability = 1e-14;

const Register& abo() {
  static const Register reg{kA, kB, kO};
  return reg;
}

Matrix2c projector(OutcomeLabel label) {
  Matrix2c m = Matrix2c::Zero();
  const int i = label == OutcomeLabel::theta_u ? 0 : 1;
  m(i, i) = 1.0;
  return m;
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0,1]");
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0,1]");
}

MatrixXc interaction_unitary(double p) {
  return gates::cnot_bo() * embed(gates::environment_rotation(p), kO, abo());
}

MatrixXc lift_with_env_up(const DensityMatrix& rho_ab) {
  if (rho_ab.dim() != 4) throw DimensionError("closed-loop channel expects a two-qubit input");
  Matrix2c up = projector(OutcomeLabel::theta_u);
  return kron(rho_ab.matrix(), up);
}

// Correction applied to B for each outcome.
Matrix2c correction(OutcomeLabel label) {
  return label == OutcomeLabel::theta_u ? pauli::identity() : pauli::x();
}

// Unnormalized [A,B] branch of a pure ABO state projected on O = k.
VectorXc branch(const VectorXc& abo_amps, OutcomeLabel label) {
  const int k = label == OutcomeLabel::theta_u ? 0 : 1;
  VectorXc v(4);
  for (int i = 0; i < 4; ++i) v(i) = abo_amps(2 * i + k);
  return v;
}

// Post-state direction at p = 1/2, used for outcomes that never occur.
PureState balanced_direction(OutcomeLabel label, double theta) {
  const VectorXc psi = bell_state(BellKind::psi_minus).amplitudes();
  const VectorXc phi = bell_state(BellKind::phi_minus).amplitudes();
  const double c = std::cos(theta), s = std::sin(theta);
  VectorXc v = label == OutcomeLabel::theta_u ? VectorXc(c * psi - s * phi) : VectorXc(s * psi + c * phi);
  return PureState::normalized({kA, kB}, std::move(v));
}

std::vector<MeasurementOutcome> outcomes_impl(double p, double theta, bool corrected) {
  check_p(p);
  const PureState after = state_after_interaction(p);
  const MatrixXc rot = embed(gates::measurement_rotation(theta), kO, abo());
  const VectorXc rotated = rot * after.amplitudes();

  std::vector<MeasurementOutcome> out;
  for (OutcomeLabel label : {OutcomeLabel::theta_u, OutcomeLabel::theta_d}) {
    VectorXc v = branch(rotated, label);
    if (corrected) v = embed(correction(label), kB, Register{kA, kB}) * v;
    const double prob = v.squaredNorm();
    if (prob < kZeroProbability) {
      PureState dir = balanced_direction(label, theta);
      if (corrected)
        dir = apply_unitary(dir, embed(correction(label), kB, Register{kA, kB}));
      out.push_back({label, 0.0, std::move(dir)});
    } else {
      out.push_back({label, prob, PureState::normalized({kA, kB}, std::move(v))});
    }
  }
  // Renormalize away rounding so the pair sums to one.
  const double total = out[0].probability + out[1].probability;
  for (auto& o : out) o.probability /= total;
  return out;
}

}  // namespace

ClosedLoopParams ClosedLoopParams::from_p_prime(double p_prime, double theta, double eta) {
  ClosedLoopParams cp;
  cp.p = p_from_p_prime(p_prime);
  cp.p_prime = p_prime;
  cp.theta = theta;
  cp.eta = eta;
  return cp;
}

void ClosedLoopParams::validate() const {
  check_p(p);
  check_eta(eta);
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  if (p_prime) {
    if (*p_prime < 0.0) throw DomainError("p' must be nonnegative");
    if (std::abs(p - p_from_p_prime(*p_prime)) > 1e-12) throw DomainError("p and p' disagree");
  }
}

double p_prime_from_p(double p) {
  check_p(p);
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (1.0 - p);
}

double p_from_p_prime(double p_prime) {
  if (!(p_prime >= 0.0)) throw DomainError("p' must be nonnegative");
  if (std::isinf(p_prime)) return 1.0;
  return p_prime / (1.0 + p_prime);
}

const char* to_string(OutcomeLabel label) {
  return label == OutcomeLabel::theta_u ? "theta_u" : "theta_d";
}

namespace gates {

Matrix2c environment_rotation(double p) {
  check_p(p);
  return std::sqrt(1.0 - p) * pauli::z() + std::sqrt(p) * pauli::x();
}

Matrix2c measurement_rotation(double theta) {
  const complex_t i(0.0, 1.0);
  return std::cos(theta) * pauli::identity() - i * std::sin(theta) * pauli::y();
}

MatrixXc cnot_bo() {
  const Register& reg = abo();
  return embed(projector(OutcomeLabel::theta_u), kO, reg) +
         embed(pauli::x(), kB, reg) * embed(projector(OutcomeLabel::theta_d), kO, reg);
}

}  // namespace gates

PureState measurement_ket(OutcomeLabel label, double theta) {
  const Matrix2c r = gates::measurement_rotation(theta).adjoint();
  VectorXc v = r.col(label == OutcomeLabel::theta_u ? 0 : 1);
  return PureState({kO}, std::move(v));
}

PureState state_after_interaction(double p) {
  check_p(p);
  const PureState start = tensor(bell_state(BellKind::psi_minus), basis_state({kO}, 0));
  return apply_unitary(start, interaction_unitary(p));
}

DensityMatrix interaction_channel(const DensityMatrix& rho_ab, double p) {
  check_p(p);
  const MatrixXc u = interaction_unitary(p);
  MatrixXc out = u * lift_with_env_up(rho_ab) * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return partial_trace(DensityMatrix(abo(), std::move(out)), {kA, kB});
}

DensityMatrix controlled_channel(const DensityMatrix& rho_ab, double p, double theta) {
  check_p(p);
  const MatrixXc pre = embed(gates::measurement_rotation(theta), kO, abo()) * interaction_unitary(p);
  const MatrixXc evolved = pre * lift_with_env_up(rho_ab) * pre.adjoint();
  MatrixXc acc = MatrixXc::Zero(8, 8);
  for (OutcomeLabel label : {OutcomeLabel::theta_u, OutcomeLabel::theta_d}) {
    const MatrixXc k = embed(correction(label), kB, abo()) * embed(projector(label), kO, abo());
    acc += k * evolved * k.adjoint();
  }
  acc = 0.5 * (acc + acc.adjoint()).eval();
  return partial_trace(DensityMatrix(abo(), std::move(acc)), {kA, kB});
}

double uncontrolled_concurrence_closed_form(double p, double eta) {
  check_p(p);
  check_eta(eta);
  return std::clamp(0.5 * std::max(0.0, 2.0 * eta * std::abs(1.0 - 2.0 * p) - 1.0 + eta), 0.0, 1.0);
}

double controlled_concurrence_closed_form(double theta, double eta) {
  check_eta(eta);
  const double c2 = std::abs(std::cos(2.0 * theta));
  return std::clamp(0.5 * std::max(0.0, eta * (1.0 + 2.0 * c2) - 1.0), 0.0, 1.0);
}

ClosedLoopOutput uncontrolled_output(double p, double eta) {
  DensityMatrix rho = interaction_channel(werner(PreparationModel::from_eta(eta)), p);
  return {std::move(rho), uncontrolled_concurrence_closed_form(p, eta)};
}

ClosedLoopOutput controlled_output(double p, double theta, double eta) {
  DensityMatrix rho = controlled_channel(werner(PreparationModel::from_eta(eta)), p, theta);
  return {std::move(rho), controlled_concurrence_closed_form(theta, eta)};
}

std::vector<MeasurementOutcome> measure_environment(double p, double theta) {
  return outcomes_impl(p, theta, false);
}

std::vector<MeasurementOutcome> corrected_outcomes(double p, double theta) {
  return outcomes_impl(p, theta, true);
}

PureStateEnsemble to_ensemble(const std::vector<MeasurementOutcome>& outcomes) {
  std::vector<PureStateEnsemble::Member> members;
  for (const auto& o : outcomes) members.push_back({o.probability, o.post_state});
  return PureStateEnsemble(std::move(members));
}

AssistanceResult entanglement_of_assistance_check(double p, std::size_t grid_points) {
  check_p(p);
  if (grid_points < 2) throw DomainError("assistance scan needs at least two grid points");
  constexpr double tie = 1e-12;
  AssistanceResult best{0.0, -1.0};
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double theta = 0.5 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(grid_points - 1);
    const double e = ensemble_average_eof(to_ensemble(measure_environment(p, theta)));
    if (e > best.best_eof + tie) best = {theta, e};
  }
  return best;
}

}  // namespace entrec
