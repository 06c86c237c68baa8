#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entrec/dephasing.hpp"
#include "entrec/entanglement.hpp"
#include "oracles.hpp"

#include <numbers>

using namespace entrec;

namespace {

constexpr double pi = std::numbers::pi;

const PureState psi_minus = bell_state(BellKind::psi_minus);
const PureState phi_minus = bell_state(BellKind::phi_minus);

// Coefficient vectors of the accumulated phase for the two coherences.
std::vector<double> bc_coeffs(int k) { return std::vector<double>(k, 1.0); }
std::vector<double> ad_coeffs(int k) {
  std::vector<double> c{1.0, 1.0};
  for (int j = 3; j <= k; ++j) c.push_back(-1.0);
  return c;
}

}  // namespace

TEST_CASE("sample_sequence") {
  SUBCASE("mu = 1 repeats the first phase") {
    NoiseParams params;
    Rng rng = trajectory_rng(9, 0);
    for (int i = 0; i < 100; ++i) {
      const PhaseSequence s = sample_sequence(params, rng);
      REQUIRE(s.phases.size() == 4);
      for (double x : s.phases) CHECK(x == s.phases[0]);
    }
  }
  SUBCASE("adjacent correlation equals mu") {
    const std::size_t n = 100000;
    NoiseParams params;
    params.mu = 0.0;
    CHECK(std::abs(adjacent_correlation(sample_sequences(params, n, 2))) < 3.0 / std::sqrt(double(n)));
    params.mu = 0.7;
    CHECK(adjacent_correlation(sample_sequences(params, n, 3)) == doctest::Approx(0.7).epsilon(0.01 / 0.7));
  }
  SUBCASE("clip_to_hardware keeps phases in [0, pi]") {
    NoiseParams params;
    params.mu = 0.3;
    params.sigma = 1.5;
    params.clip_to_hardware = true;
    for (const PhaseSequence& s : sample_sequences(params, 2000, 4))
      for (double x : s.phases) CHECK((x >= 0.0 && x <= pi));
  }
  SUBCASE("parameter validation") {
    NoiseParams params;
    params.mu = 1.5;
    CHECK_THROWS(params.validate());
    params.mu = 0.5;
    params.sigma = 0.0;
    CHECK_THROWS(params.validate());
    params.sigma = 0.6;
    CHECK_THROWS(TrajectoryControl::echoed(4).validate(4));
    CHECK_THROWS(TrajectoryControl::echoed(0).validate(4));
  }
}

TEST_CASE("trajectory_state examples") {
  const PhaseSequence quarter{{pi / 2, pi / 2, pi / 2, pi / 2}};
  for (const TrajectoryControl& c : {TrajectoryControl::uncontrolled(), TrajectoryControl::echoed(),
                                     TrajectoryControl::corrected()})
    CHECK(std::norm(overlap(trajectory_state(quarter, 0, c), psi_minus)) == doctest::Approx(1.0));

  // Accumulated phase pi turns Psi- into Psi+.
  const PureState two = trajectory_state(quarter, 2, TrajectoryControl::uncontrolled());
  CHECK(std::norm(overlap(two, bell_state(BellKind::psi_plus))) == doctest::Approx(1.0).epsilon(1e-14));

  const double chi = 0.83;
  const PhaseSequence flat{{chi, chi, chi, chi}};
  const PureState echoed = trajectory_state(flat, 4, TrajectoryControl::echoed());
  CHECK(std::norm(overlap(echoed, phi_minus)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pure_concurrence(echoed) == doctest::Approx(1.0));

  CHECK_THROWS(trajectory_state(flat, 5, TrajectoryControl::uncontrolled()));
  CHECK_THROWS(trajectory_state(flat, -1, TrajectoryControl::uncontrolled()));
}

TEST_CASE("trajectory states follow the accumulated-phase form") {
  Rng rng = trajectory_rng(21, 0);
  NoiseParams params;
  params.mu = 0.4;
  const double s2 = 1.0 / std::numbers::sqrt2;
  for (int trial = 0; trial < 100; ++trial) {
    const PhaseSequence s = sample_sequence(params, rng);
    for (int k = 1; k <= 4; ++k) {
      VectorXc expected = VectorXc::Zero(4);
      expected(1) = s2;
      expected(2) = -s2 * std::polar(1.0, s.accumulated(k));
      CHECK(std::norm(trajectory_state(s, k, TrajectoryControl::uncontrolled()).amplitudes().dot(expected)) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
    for (int k = 3; k <= 4; ++k) {
      double phase = s.phases[0] + s.phases[1];
      for (int j = 3; j <= k; ++j) phase -= s.phases[j - 1];
      VectorXc expected = VectorXc::Zero(4);
      expected(0) = s2;
      expected(3) = -s2 * std::polar(1.0, phase);
      CHECK(std::norm(trajectory_state(s, k, TrajectoryControl::echoed()).amplitudes().dot(expected)) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
    for (CorrectionVariant v : {CorrectionVariant::ideal, CorrectionVariant::replace_last_step}) {
      const PureState out = trajectory_state(s, 4, TrajectoryControl::corrected(v));
      CHECK(std::norm(overlap(out, psi_minus)) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form coherences") {
  const double sigma = 0.6, mean = pi / 2;

  SUBCASE("examples") {
    const complex_t bc1 = analytic_bc(1, 0.3, sigma, mean);
    CHECK(std::abs(bc1) == doctest::Approx(0.417635105705636).epsilon(1e-12));
    // -1/2 e^{-i pi/2} e^{-0.18}: the phase is -pi/2 relative to the -1/2 prefactor.
    CHECK(std::arg(bc1 / complex_t(-0.5)) == doctest::Approx(-pi / 2).epsilon(1e-12));

    for (int k = 1; k <= 4; ++k)
      CHECK(std::abs(analytic_bc(k, 1.0, sigma, mean)) ==
            doctest::Approx(0.5 * std::exp(-0.5 * sigma * sigma * k * k)).epsilon(1e-12));
    for (int k = 1; k <= 4; ++k) {
      const complex_t z = analytic_bc(k, 0.4, 0.0, mean);
      CHECK(std::abs(z - (-0.5 * std::polar(1.0, -k * mean))) < 1e-14);
    }

    CHECK(std::abs(analytic_ad_echo(4, 1.0, sigma, mean) - complex_t(-0.5)) < 1e-15);
    CHECK(std::abs(analytic_ad_echo(3, 1.0, sigma, mean)) == doctest::Approx(0.417635105705636).epsilon(1e-12));
    CHECK(std::abs(analytic_ad_echo(4, 0.0, sigma, mean)) == doctest::Approx(0.24337612797998584).epsilon(1e-12));
  }
  SUBCASE("agree with exact enumeration of the phase process") {
    for (double mu : {0.0, 0.2, 0.5, 0.7, 0.9, 1.0}) {
      for (int k = 1; k <= 4; ++k) {
        const complex_t want = oracle::averaged_coherence(bc_coeffs(k), mu, sigma, mean);
        CHECK(std::abs(analytic_bc(k, mu, sigma, mean) - want) < 1e-14);
      }
      for (int k = 3; k <= 4; ++k) {
        const complex_t want = oracle::averaged_coherence(ad_coeffs(k), mu, sigma, mean);
        CHECK(std::abs(analytic_ad_echo(k, mu, sigma, mean) - want) < 1e-14);
      }
    }
  }
  SUBCASE("out of range") {
    CHECK_THROWS(analytic_bc(0, 0.5, sigma, mean));
    CHECK_THROWS(analytic_bc(5, 0.5, sigma, mean));
    CHECK_THROWS(analytic_ad_echo(2, 0.5, sigma, mean));
  }
}

TEST_CASE("Monte Carlo averages") {
  MonteCarloOptions opts;
  opts.n_samples = 100000;
  opts.seed = 17;
  const double tol = 5.0 / std::sqrt(double(opts.n_samples));

  SUBCASE("vanishing noise keeps full concurrence") {
    NoiseParams params;
    params.sigma = 1e-9;
    params.mu = 0.3;
    opts.n_samples = 1000;
    const MonteCarloAverage avg = monte_carlo_rho(params, TrajectoryControl::uncontrolled(), 4, opts);
    CHECK(concurrence(avg.rho) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("matches the closed forms") {
    for (double mu : {0.0, 0.2, 0.7, 1.0}) {
      NoiseParams params;
      params.mu = mu;
      for (int k = 1; k <= 4; ++k) {
        const MonteCarloAverage u = monte_carlo_rho(params, TrajectoryControl::uncontrolled(), k, opts);
        CHECK(std::abs(u.rho(1, 2) - analytic_bc(k, mu, params.sigma, params.mean_phase)) < tol);
        // Populations never change.
        CHECK(std::abs(u.rho(1, 1).real() - 0.5) < 1e-12);
        CHECK(std::abs(u.rho(0, 0).real()) < 1e-12);
      }
      for (int k = 3; k <= 4; ++k) {
        const MonteCarloAverage e = monte_carlo_rho(params, TrajectoryControl::echoed(), k, opts);
        CHECK(std::abs(e.rho(0, 3) - analytic_ad_echo(k, mu, params.sigma, params.mean_phase)) < tol);
        CHECK(std::abs(e.rho(0, 0).real() - 0.5) < 1e-12);
        CHECK(std::abs(e.rho(1, 1).real()) < 1e-12);
      }
    }
  }
  SUBCASE("the maximally mixed state is a fixed point") {
    NoiseParams params;
    params.mu = 0.5;
    opts.n_samples = 5000;
    const DensityMatrix mixed = DensityMatrix::maximally_mixed({kA, kB});
    for (const TrajectoryControl& c : {TrajectoryControl::uncontrolled(), TrajectoryControl::echoed()}) {
      const MonteCarloAverage avg = monte_carlo_channel(mixed, params, c, 4, opts);
      CHECK((avg.rho.matrix() - mixed.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("worker count does not change the result") {
    NoiseParams params;
    params.mu = 0.7;
    opts.n_samples = 30001;
    MonteCarloOptions many = opts;
    many.workers = 8;
    const MonteCarloAverage a = monte_carlo_rho(params, TrajectoryControl::echoed(), 4, opts);
    const MonteCarloAverage b = monte_carlo_rho(params, TrajectoryControl::echoed(), 4, many);
    CHECK(a.rho.matrix() == b.rho.matrix());
    CHECK(a.second_moment == b.second_moment);

    const auto s1 = sample_sequences(params, 3000, 5, 1);
    const auto s8 = sample_sequences(params, 3000, 5, 8);
    REQUIRE(s1.size() == s8.size());
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i].phases == s8[i].phases);
  }
}
