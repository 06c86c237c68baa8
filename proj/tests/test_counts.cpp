#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entrec/closedloop.hpp"
#include "entrec/counts.hpp"
#include "oracles.hpp"

#include <numbers>

using namespace entrec;

namespace {

CoincidenceCounts p_counts(std::uint64_t hh, std::uint64_t vv, std::uint64_t hv, std::uint64_t vh) {
  CoincidenceCounts c;
  c[CountLabel::HHd] = hh;
  c[CountLabel::VVd] = vv;
  c[CountLabel::HVu] = hv;
  c[CountLabel::VHu] = vh;
  return c;
}

CoincidenceCounts theta_counts(std::uint64_t hv1, std::uint64_t vh1, std::uint64_t hv0, std::uint64_t vh0) {
  CoincidenceCounts c;
  c[CountLabel::HV1] = hv1;
  c[CountLabel::VH1] = vh1;
  c[CountLabel::HV0] = hv0;
  c[CountLabel::VH0] = vh0;
  return c;
}

double p_prime_of(const std::vector<std::uint64_t>& v) {
  const double den = double(v[2] + v[3]);
  return den > 0 ? double(v[0] + v[1]) / den : std::nan("");
}

double theta_of(const std::vector<std::uint64_t>& v) {
  const double den = double(v[2] + v[3]);
  return den > 0 ? std::atan(std::sqrt(double(v[0] + v[1]) / den)) : std::nan("");
}

}  // namespace

TEST_CASE("p prime estimate") {
  const Estimate zero = estimate_p_prime(p_counts(0, 0, 500, 500));
  CHECK(zero.value == 0.0);
  CHECK(zero.delta == 0.0);

  const Estimate one = estimate_p_prime(p_counts(100, 100, 100, 100));
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.delta == doctest::Approx(0.1).epsilon(1e-12));

  const Estimate quarter = estimate_p_prime(p_counts(50, 50, 200, 200));
  CHECK(quarter.value == doctest::Approx(0.25).epsilon(1e-12));
  // 100/400^2 + 2 * 200 * 100^2 / 400^4
  CHECK(quarter.delta == doctest::Approx(std::sqrt(100.0 / 160000.0 + 2 * 200.0 * 1e4 / 2.56e10)).epsilon(1e-12));
  const double boot = oracle::poisson_bootstrap_std({50, 50, 200, 200}, p_prime_of, 100000, 41);
  CHECK(std::abs(boot - quarter.delta) / quarter.delta < 0.1);

  CHECK_THROWS_AS(estimate_p_prime(p_counts(10, 10, 0, 0)), EstimationError);
}

TEST_CASE("theta estimate") {
  const Estimate r0 = estimate_theta(theta_counts(0, 0, 400, 400));
  CHECK(r0.value == 0.0);
  CHECK(r0.delta == doctest::Approx(0.017677669529663688).epsilon(1e-12));

  const Estimate r1 = estimate_theta(theta_counts(400, 400, 400, 400));
  CHECK(r1.value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
  CHECK(r1.delta == doctest::Approx(0.0125).epsilon(1e-12));

  const Estimate scaled = estimate_theta(theta_counts(1600, 1600, 1600, 1600));
  CHECK(scaled.value == doctest::Approx(r1.value).epsilon(1e-14));
  CHECK(scaled.delta == doctest::Approx(r1.delta / 2).epsilon(1e-12));

  const Estimate mid = estimate_theta(theta_counts(150, 150, 250, 250));
  const double boot = oracle::poisson_bootstrap_std({150, 150, 250, 250}, theta_of, 100000, 43);
  CHECK(std::abs(boot - mid.delta) / mid.delta < 0.1);

  CHECK_THROWS_AS(estimate_theta(theta_counts(5, 5, 0, 0)), EstimationError);
}

TEST_CASE("simulate_counts") {
  CountProbabilities probs{};
  CHECK_THROWS(simulate_counts(probs, 0, 1));

  for (std::size_t i = 0; i < 4; ++i) probs[i] = 0.25;
  const CoincidenceCounts c = simulate_counts(probs, 1000000, 5);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(double(c.values[i]) - 2.5e5) < 5 * std::sqrt(2.5e5));
  for (std::size_t i = 4; i < 8; ++i) CHECK(c.values[i] == 0);
  CHECK(simulate_counts(probs, 1000, 9).values == simulate_counts(probs, 1000, 9).values);
}

TEST_CASE("closed-loop count probabilities") {
  for (double p : {0.0, 0.3, 0.5}) {
    for (double t : {0.0, 0.4}) {
      const CountProbabilities probs = closed_loop_count_probabilities(p, t);
      double natural = 0, rotated = 0;
      for (std::size_t i = 0; i < 4; ++i) natural += probs[i];
      for (std::size_t i = 4; i < 8; ++i) rotated += probs[i];
      CHECK(natural == doctest::Approx(1.0));
      CHECK(rotated == doctest::Approx(1.0 - p));
      CHECK(probs[std::size_t(CountLabel::HHd)] + probs[std::size_t(CountLabel::VVd)] == doctest::Approx(p));
    }
  }
}

TEST_CASE("theta is recovered at the balanced point") {
  const CountProbabilities probs = closed_loop_count_probabilities(0.5, 0.0);
  int covered = 0;
  const int trials = 1000;
  for (int s = 0; s < trials; ++s) {
    const Estimate e = estimate_theta(simulate_counts(probs, 4000, 1000 + s));
    if (std::abs(e.value) <= 3 * e.delta) ++covered;
  }
  CHECK(covered >= 990);
}

TEST_CASE("p prime is recovered from large samples") {
  const double p = 0.3;
  const CountProbabilities probs = closed_loop_count_probabilities(p, 0.0);
  int covered = 0;
  const int trials = 200;
  for (int s = 0; s < trials; ++s) {
    const Estimate e = estimate_p_prime(simulate_counts(probs, 10000000, 7000 + s));
    if (std::abs(e.value - p_prime_from_p(p)) <= 3 * e.delta) ++covered;
  }
  CHECK(covered >= 198);
}
