#include "entrec/openloop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace entrec {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0,1]");
}

double x_form_concurrence(double coherence_abs, double eta) {
  return std::clamp(2.0 * std::max(0.0, eta * coherence_abs - (1.0 - eta) / 4.0), 0.0, 1.0);
}

}  // namespace

const char* to_string(Method m) {
  return m == Method::analytic ? "analytic" : "monte_carlo";
}

Method method_from_string(const std::string& s) {
  if (s == "analytic") return Method::analytic;
  if (s == "monte_carlo" || s == "mc") return Method::monte_carlo;
  throw std::invalid_argument("unknown method '" + s + "'");
}

const char* to_string(ConcurrencePath p) {
  switch (p) {
    case ConcurrencePath::closed_form: return "closed_form";
    case ConcurrencePath::x_state: return "x_state";
    case ConcurrencePath::wootters: return "wootters";
  }
  return "?";
}

double concurrence_uncontrolled(int k, double mu, double sigma, double eta) {
  check_eta(eta);
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (k < 0 || k > 4) throw DomainError("uncontrolled closed form is defined for k in 0..4");
  const double bc = k == 0 ? 0.5 : std::abs(analytic_bc(k, mu, sigma, 0.0));
  return x_form_concurrence(bc, eta);
}

double concurrence_echoed(int k, double mu, double sigma, double eta) {
  check_eta(eta);
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("mu must lie in [0,1]");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (k < 3 || k > 4) throw DomainError("echoed closed form is defined for k in 3..4");
  return x_form_concurrence(std::abs(analytic_ad_echo(k, mu, sigma, 0.0)), eta);
}

double concurrence_corrected(double eta) {
  check_eta(eta);
  return x_form_concurrence(0.5, eta);
}

std::pair<double, ConcurrencePath> reported_concurrence(const DensityMatrix& rho) {
  if (is_x_state(rho)) return {concurrence_x_state(rho), ConcurrencePath::x_state};
  return {concurrence(rho), ConcurrencePath::wootters};
}

MonteCarloAverage open_loop_state(const NoiseParams& params, const TrajectoryControl& control,
                                  const PreparationModel& prep, int k, const MonteCarloOptions& opts) {
  return monte_carlo_channel(werner(prep), params, control, k, opts);
}

OpenLoopResult run_open_loop(const NoiseParams& params, const TrajectoryControl& control,
                             const PreparationModel& prep, int k, Method method,
                             const MonteCarloOptions& opts) {
  params.validate();
  control.validate(params.steps);
  if (k < 0 || k > params.steps) throw DomainError("step " + std::to_string(k) + " out of range");
  if (control.kind == ControlKind::echoed && k <= control.echo_after_step)
    throw DomainError("echoed dynamics is only defined after the echo pulse");
  if (control.kind == ControlKind::corrected && k < control.correction_step(params.steps))
    throw DomainError("corrected dynamics is only defined from the correction step on");

  OpenLoopResult res{k, 0.0, 0.0, method, control.kind, prep, ConcurrencePath::closed_form, std::nullopt};

  if (method == Method::analytic) {
    switch (control.kind) {
      case ControlKind::uncontrolled:
        res.concurrence = concurrence_uncontrolled(k, params.mu, params.sigma, prep.eta());
        break;
      case ControlKind::echoed:
        if (control.echo_after_step != 2)
          throw DomainError("echoed closed form assumes the echo pulse after step 2");
        res.concurrence = concurrence_echoed(k, params.mu, params.sigma, prep.eta());
        break;
      case ControlKind::corrected:
        if (k != control.correction_step(params.steps))
          throw DomainError("corrected closed form is only available at the correction step");
        res.concurrence = concurrence_corrected(prep.eta());
        break;
    }
  } else {
    const MonteCarloAverage avg = open_loop_state(params, control, prep, k, opts);
    const auto [c, path] = reported_concurrence(avg.rho);
    res.concurrence = c;
    res.path = path;
    const bool flipped = control.kind == ControlKind::echoed;
    res.stat_error = 2.0 * (flipped ? avg.standard_error(0, 3) : avg.standard_error(1, 2));
  }
  res.eof = eof_from_concurrence(res.concurrence);
  return res;
}

}  // namespace entrec
