#include <cmath>
#include <string>

#include "doctest.h"
#include "dremnorm/errors.hpp"
#include "dremnorm/lti_sim.hpp"

using namespace dremnorm;

namespace {

const TransferFunction kPaperPlant{{2.0, 1.0}, {1.0, 2.0}};  // (2p+1)/(p^2+p+2)
const TransferFunction kFirstOrder{{1.0}, {1.0}};            // 1/(p+1)

double first_order_error(double dt) {
  const SampledSignal y = simulate(kFirstOrder, make_step_input(1.0, dt, 1.0 + dt));
  const auto k = static_cast<std::size_t>(std::llround(1.0 / dt));
  return std::abs(y.samples[k] - (1.0 - std::exp(-1.0)));
}

}  // namespace

TEST_CASE("controllable canonical realization") {
  SUBCASE("second-order plant") {
    const StateSpace ss = realize_state_space(kPaperPlant);
    Eigen::MatrixXd A(2, 2);
    A << 0, 1, -2, -1;
    CHECK(ss.A.isApprox(A));
    CHECK(ss.b.isApprox(Eigen::Vector2d(0, 1)));
    CHECK(ss.c.isApprox(Eigen::RowVector2d(1, 2)));
  }
  SUBCASE("first-order plant") {
    const StateSpace ss = realize_state_space(kFirstOrder);
    CHECK(ss.A(0, 0) == -1.0);
    CHECK(ss.b(0) == 1.0);
    CHECK(ss.c(0) == 1.0);
  }
  SUBCASE("transfer function of the realization matches") {
    // c (sI - A)^{-1} b at a few complex-free test points s
    const StateSpace ss = realize_state_space(kPaperPlant);
    for (double s : {0.0, 0.5, 3.0}) {
      const Eigen::MatrixXd sIA = s * Eigen::MatrixXd::Identity(2, 2) - ss.A;
      const double g = ss.c * sIA.inverse() * ss.b;
      CHECK(g == doctest::Approx((2 * s + 1) / (s * s + s + 2)));
    }
  }
  SUBCASE("improper plants are rejected") {
    CHECK_THROWS_AS(realize_state_space(TransferFunction{{1.0, 2.0}, {3.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(realize_state_space(TransferFunction{{1.0}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(realize_state_space(TransferFunction{{}, {1.0}}), std::invalid_argument);
  }
  SUBCASE("parameter vector ordering") {
    const Eigen::VectorXd theta = kPaperPlant.parameters();
    CHECK(theta.isApprox(Eigen::Vector4d(2, 1, 1, 2)));
  }
}

TEST_CASE("forward Euler simulation") {
  SUBCASE("step response settles to b(0)/a(0)") {
    const SampledSignal y = simulate(kPaperPlant, make_step_input(1.0, 0.01, 30.0));
    CHECK(std::abs(y.samples.back() - 0.5) <= 1e-3);
  }
  SUBCASE("agrees with a 10x finer reference run") {
    // reference max deviation computed offline: 8.3e-3
    const SampledSignal coarse = simulate(kPaperPlant, make_step_input(1.0, 0.01, 30.0));
    const SampledSignal fine = simulate(kPaperPlant, make_step_input(1.0, 0.001, 30.0));
    double worst = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      worst = std::max(worst, std::abs(coarse.samples[k] - fine.samples[10 * k]));
    }
    CHECK(worst <= 1e-2);
  }
  SUBCASE("zero input and zero state stay at zero") {
    const SampledSignal y = simulate(kPaperPlant, make_step_input(0.0, 0.01, 5.0));
    for (double v : y.samples) CHECK(v == 0.0);
  }
  SUBCASE("first-order step response at t = 1") {
    CHECK(std::abs(first_order_error(1e-3)) <= 1e-3);
    for (double dt : {1e-2, 5e-3, 1e-3}) CHECK(first_order_error(dt) <= 5 * dt);
  }
  SUBCASE("halving dt halves the error") {
    for (double dt : {2e-2, 1e-2, 5e-3}) {
      const double ratio = first_order_error(dt) / first_order_error(dt / 2);
      CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
    }
  }
  SUBCASE("deterministic") {
    const SampledSignal u = make_step_input(3.0, 0.01, 7.0);
    CHECK(simulate(kPaperPlant, u).samples == simulate(kPaperPlant, u).samples);
  }
  SUBCASE("non-zero initial state") {
    // 1/(p+1), x0 = 1, u = 0: y_k = (1 - dt)^k
    const SampledSignal y =
        simulate(kFirstOrder, make_step_input(0.0, 0.01, 1.0), Eigen::VectorXd::Ones(1));
    CHECK(y.samples[50] == doctest::Approx(std::pow(0.99, 50)));
    CHECK_THROWS_AS(simulate(kFirstOrder, make_step_input(0.0, 0.01, 1.0), Eigen::Vector2d(0, 0)),
                    std::invalid_argument);
  }
  SUBCASE("divergence names the time") {
    const TransferFunction unstable{{1.0}, {-100.0}};  // 1/(p - 100)
    try {
      simulate(unstable, make_step_input(1.0, 0.01, 100.0));
      FAIL("expected divergence");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("diverged at t=") != std::string::npos);
    }
  }
}

TEST_CASE("step input") {
  const SampledSignal one = make_step_input(1.0, 0.01, 10.0);
  CHECK(one.size() == 1000);
  for (double v : one.samples) CHECK(v == 1.0);
  for (double v : make_step_input(0.0, 0.01, 1.0).samples) CHECK(v == 0.0);
  for (double v : make_step_input(100.0, 0.01, 10.0).samples) CHECK(v == 100.0);
  CHECK_THROWS_AS(make_step_input(1.0, 0.01, 0.0), std::invalid_argument);
}

TEST_CASE("measurement noise") {
  const SampledSignal y = simulate(kPaperPlant, make_step_input(1.0, 0.01, 10.0));
  CHECK(add_noise(y, 0.0, 7).samples == y.samples);
  CHECK(add_noise(y, 0.1, 7).samples == add_noise(y, 0.1, 7).samples);
  CHECK(add_noise(y, 0.1, 7).samples != add_noise(y, 0.1, 8).samples);
  const SampledSignal noisy = add_noise(y, 0.1, 42);
  double worst = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    worst = std::max(worst, std::abs(noisy.samples[k] - y.samples[k]));
  }
  CHECK(worst <= 0.1);
  CHECK(worst > 0.05);
  CHECK_THROWS_AS(add_noise(y, -1.0, 1), std::invalid_argument);
}
