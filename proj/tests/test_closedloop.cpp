#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entrec/closedloop.hpp"

#include <numbers>

using namespace entrec;

namespace {

constexpr double pi = std::numbers::pi;

const PureState psi = bell_state(BellKind::psi_minus);
const PureState phi = bell_state(BellKind::phi_minus);
const VectorXc up = basis_state({kO}, 0).amplitudes();
const VectorXc down = basis_state({kO}, 1).amplitudes();

MatrixXc proj(const VectorXc& v) { return v * v.adjoint(); }

double max_abs_diff(const MatrixXc& a, const MatrixXc& b) { return (a - b).cwiseAbs().maxCoeff(); }

double eta_of(double f) { return (4.0 * f - 1.0) / 3.0; }

}  // namespace

TEST_CASE("gates are unitary") {
  for (int i = 0; i <= 20; ++i) CHECK(is_unitary(gates::environment_rotation(i / 20.0), 1e-12));
  for (double t = 0.0; t <= pi; t += 0.1) CHECK(is_unitary(gates::measurement_rotation(t), 1e-12));
  CHECK(is_unitary(gates::cnot_bo(), 1e-12));
}

TEST_CASE("state after the interaction") {
  for (double p : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    const VectorXc want = std::sqrt(1 - p) * kron(psi.amplitudes(), up) + std::sqrt(p) * kron(phi.amplitudes(), down);
    const PureState got = state_after_interaction(p);
    CHECK(got.reg() == Register{kA, kB, kO});
    CHECK((got.amplitudes() - want).cwiseAbs().maxCoeff() < 1e-12);
  }
  const DensityMatrix red = partial_trace(DensityMatrix::from_pure(state_after_interaction(0.5)), {kA, kB});
  CHECK(concurrence(red) == doctest::Approx(0.0));
  CHECK_THROWS(state_after_interaction(1.2));
}

TEST_CASE("uncontrolled output") {
  CHECK(uncontrolled_output(0.0, 1.0).concurrence == doctest::Approx(1.0));
  for (double eta : {1.0, 0.7, 0.3}) CHECK(uncontrolled_output(0.5, eta).concurrence == 0.0);
  CHECK(uncontrolled_output(0.0, eta_of(0.90)).concurrence == doctest::Approx(0.8).epsilon(1e-12));
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    CHECK(uncontrolled_concurrence_closed_form(p, 1.0) ==
          doctest::Approx(uncontrolled_concurrence_closed_form(1.0 - p, 1.0)).epsilon(1e-12));
    for (double eta : {1.0, eta_of(0.90), eta_of(0.95), 0.5}) {
      const ClosedLoopOutput out = uncontrolled_output(p, eta);
      CHECK(std::abs(concurrence(out.rho) - out.concurrence) < 1e-10);
    }
  }
}

TEST_CASE("measure_environment") {
  SUBCASE("natural basis") {
    const double p = 0.3;
    const auto outs = measure_environment(p, 0.0);
    REQUIRE(outs.size() == 2);
    CHECK(outs[0].label == OutcomeLabel::theta_u);
    CHECK(outs[0].probability == doctest::Approx(1 - p));
    CHECK(std::norm(overlap(outs[0].post_state, psi)) == doctest::Approx(1.0));
    CHECK(outs[1].probability == doctest::Approx(p));
    CHECK(std::norm(overlap(outs[1].post_state, phi)) == doctest::Approx(1.0));
  }
  SUBCASE("balanced environment") {
    for (double t : {0.1, pi / 8, 0.9}) {
      const auto outs = measure_environment(0.5, t);
      CHECK(outs[0].probability == doctest::Approx(0.5));
      CHECK(outs[1].probability == doctest::Approx(0.5));
      // Real superpositions: the rotation about y keeps the amplitudes real.
      const VectorXc fu = std::cos(t) * psi.amplitudes() - std::sin(t) * phi.amplitudes();
      const VectorXc fd = std::sin(t) * psi.amplitudes() + std::cos(t) * phi.amplitudes();
      CHECK(std::norm(outs[0].post_state.amplitudes().dot(fu)) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::norm(outs[1].post_state.amplitudes().dot(fd)) == doctest::Approx(1.0).epsilon(1e-12));
      for (const auto& o : outs) CHECK(pure_concurrence(o.post_state) == doctest::Approx(std::abs(std::cos(2 * t))));
    }
    for (const auto& o : measure_environment(0.5, pi / 4)) CHECK(pure_concurrence(o.post_state) < 1e-12);
  }
  SUBCASE("probabilities and the measurement-free average") {
    for (int i = 0; i <= 10; ++i) {
      const double p = i / 10.0;
      for (double t = 0.0; t <= pi / 2 + 1e-12; t += pi / 20) {
        const auto outs = measure_environment(p, t);
        const double c2 = std::cos(t) * std::cos(t), s2 = std::sin(t) * std::sin(t);
        CHECK(outs[0].probability == doctest::Approx((1 - p) * c2 + p * s2).epsilon(1e-12));
        CHECK(outs[1].probability == doctest::Approx((1 - p) * s2 + p * c2).epsilon(1e-12));
        MatrixXc mix = MatrixXc::Zero(4, 4);
        for (const auto& o : outs) mix += o.probability * proj(o.post_state.amplitudes());
        CHECK(max_abs_diff(mix, uncontrolled_output(p, 1.0).rho.matrix()) < 1e-12);
      }
    }
  }
  SUBCASE("projecting on the rotated kets is the same measurement") {
    for (double p : {0.2, 0.5, 0.9}) {
      for (double t : {0.0, 0.3, 1.1}) {
        const VectorXc after = state_after_interaction(p).amplitudes();
        const auto outs = measure_environment(p, t);
        for (const auto& o : outs) {
          const VectorXc ket = measurement_ket(o.label, t).amplitudes();
          // <theta_k|_O applied to the [A,B,O] state.
          VectorXc branch = VectorXc::Zero(4);
          for (int ab = 0; ab < 4; ++ab) branch(ab) = std::conj(ket(0)) * after(2 * ab) + std::conj(ket(1)) * after(2 * ab + 1);
          CHECK(branch.squaredNorm() == doctest::Approx(o.probability).epsilon(1e-12));
          if (o.probability > 1e-12)
            CHECK(std::norm(o.post_state.amplitudes().dot(branch.normalized())) == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("controlled output") {
  for (int i = 0; i <= 10; ++i)
    CHECK(controlled_output(i / 10.0, 0.0, 1.0).concurrence == doctest::Approx(1.0));
  CHECK(controlled_output(0.5, pi / 8, 1.0).concurrence == doctest::Approx(std::cos(pi / 4)).epsilon(1e-9));
  CHECK(controlled_output(0.5, 0.0, eta_of(0.95)).concurrence == doctest::Approx(0.9).epsilon(1e-12));

  for (double t = 0.0; t <= pi / 2 + 1e-12; t += pi / 40) {
    const MatrixXc want = std::cos(t) * std::cos(t) * proj(psi.amplitudes()) + std::sin(t) * std::sin(t) * proj(phi.amplitudes());
    CHECK(max_abs_diff(controlled_output(0.5, t, 1.0).rho.matrix(), want) < 1e-12);
  }

  for (double t = 0.0; t <= pi / 2 + 1e-12; t += pi / 30)
    for (double eta : {1.0, eta_of(0.90), eta_of(0.95)}) {
      const ClosedLoopOutput out = controlled_output(0.5, t, eta);
      CHECK(std::abs(concurrence(out.rho) - out.concurrence) < 1e-10);
    }
}

TEST_CASE("corrected outcomes") {
  // The correction is local, so each member keeps its concurrence.
  for (double t : {0.2, 0.7}) {
    const auto outs = corrected_outcomes(0.5, t);
    for (const auto& o : outs) CHECK(pure_concurrence(o.post_state) == doctest::Approx(std::abs(std::cos(2 * t))));
    const PureStateEnsemble ens = to_ensemble(outs);
    CHECK(ensemble_average_eof(ens) >= eof_from_concurrence(concurrence(mixture(ens))) - 1e-9);
  }
}

TEST_CASE("entanglement of assistance") {
  const auto half = entanglement_of_assistance_check(0.5);
  CHECK(half.best_theta == 0.0);
  CHECK(half.best_eof == doctest::Approx(1.0));
  const auto zero = entanglement_of_assistance_check(0.0);
  CHECK(zero.best_theta == 0.0);
  CHECK(zero.best_eof == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 181; ++i) {
    const double t = (pi / 2) * double(i) / 180.0;
    CHECK(ensemble_average_eof(to_ensemble(measure_environment(0.0, t))) == doctest::Approx(1.0));
  }
  const auto p3 = entanglement_of_assistance_check(0.3);
  CHECK(p3.best_theta == 0.0);
  CHECK(p3.best_eof == doctest::Approx(1.0));
}

TEST_CASE("p prime conversion") {
  CHECK(p_prime_from_p(0.5) == doctest::Approx(1.0));
  CHECK(p_from_p_prime(0.25) == doctest::Approx(0.2));
  const ClosedLoopParams c = ClosedLoopParams::from_p_prime(3.0, 0.1, 1.0);
  CHECK(c.p == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS(ClosedLoopParams::from_p_prime(-0.5));
  ClosedLoopParams bad{0.5, 0.0, 1.0, 3.0};
  CHECK_THROWS(bad.validate());
}
