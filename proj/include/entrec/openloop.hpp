#pragma once

// Entanglement under the stroboscopic dephasing channel for the uncontrolled,
// corrected and echoed dynamics, by closed form and by Monte Carlo.

#include "entrec/dephasing.hpp"
#include "entrec/entanglement.hpp"

#include <optional>

namespace entrec {

enum class Method { analytic, monte_carlo };

const char* to_string(Method m);
Method method_from_string(const std::string& s);

enum class ConcurrencePath { closed_form, x_state, wootters };

const char* to_string(ConcurrencePath p);

struct OpenLoopResult {
  int step;
  double eof;
  double concurrence;
  Method method;
  ControlKind control;
  PreparationModel prep;
  ConcurrencePath path;
  /// Standard error of the concurrence (Monte Carlo only).
  std::optional<double> stat_error;
};

/// C_unco(k) = 2 max{0, eta |rho_bc(k)| - (1 - eta)/4}, k in 0..4.
double concurrence_uncontrolled(int k, double mu, double sigma, double eta);

/// C_echo(k) = 2 max{0, eta |rho~_ad(k)| - (1 - eta)/4}, k in 3..4.
double concurrence_echoed(int k, double mu, double sigma, double eta);

/// The corrected dynamics returns the input state: C = max{0, (3 eta - 1)/2}.
double concurrence_corrected(double eta);

/// Concurrence of a two-qubit state via the X shortcut when it applies.
std::pair<double, ConcurrencePath> reported_concurrence(const DensityMatrix& rho);

/// Monte Carlo output state for input eta|Psi-><Psi-| + (1-eta)I/4.
MonteCarloAverage open_loop_state(const NoiseParams& params, const TrajectoryControl& control,
                                  const PreparationModel& prep, int k, const MonteCarloOptions& opts);

/// Evaluates one point of the open-loop protocol.
///
/// The echoed control needs k > echo_after_step and the corrected control
/// needs k >= its correction step; earlier steps are the uncontrolled
/// dynamics and must be requested as such.
OpenLoopResult run_open_loop(const NoiseParams& params, const TrajectoryControl& control,
                             const PreparationModel& prep, int k, Method method,
                             const MonteCarloOptions& opts = {});

}  // namespace entrec
