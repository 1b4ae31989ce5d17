#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "dremnorm/drem_mixing.hpp"
#include "dremnorm/lti_sim.hpp"
#include "oracles.hpp"

using namespace dremnorm;

namespace {

const TransferFunction kPlant{{2.0, 1.0}, {1.0, 2.0}};
const Eigen::Vector4d kTheta(2, 1, 1, 2);

RegressionFrame constant_frame(double t) {
  RegressionFrame f;
  f.t = t;
  f.z_bar = 3.0;
  f.omega_bar = Eigen::Vector4d(1.0, -2.0, 0.5, 4.0);
  f.output_taps = 2;
  return f;
}

std::vector<MixedRegression> pipeline(double amplitude, double duration) {
  const double dt = 0.01;
  const SampledSignal u = make_step_input(amplitude, dt, duration);
  const SampledSignal y = simulate(kPlant, u);
  FilterBank filters = build_filters(FilterSpec({20.0, 100.0}), 1);
  DelayBank delays({0.2, 0.4, 0.6}, dt, 4);
  std::vector<MixedRegression> out;
  for (std::size_t k = 0; k < u.size(); ++k) {
    out.push_back(mix(extend(filter_step(filters, u.samples[k], y.samples[k], dt), delays)));
  }
  return out;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index n, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = dist(rng);
  return M;
}

double inf_norm(const Eigen::MatrixXd& M) { return M.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

TEST_CASE("delay bank construction") {
  DelayBank bank({0.2, 0.4, 0.6}, 0.01, 4);
  CHECK(bank.delay_steps() == std::vector<std::size_t>{20, 40, 60});
  CHECK(bank.t0() == doctest::Approx(0.6));
  CHECK(bank.warnings().empty());

  DelayBank rounded({0.203, 0.4, 0.6}, 0.01, 4);
  CHECK(rounded.delay_steps()[0] == 20);
  CHECK(rounded.warnings().size() == 1);

  CHECK_THROWS_AS(DelayBank({0.2, 0.2, 0.6}, 0.01, 4), std::invalid_argument);
  CHECK_THROWS_AS(DelayBank({0.2, 0.201, 0.6}, 0.01, 4), std::invalid_argument);
  CHECK_THROWS_AS(DelayBank({0.2, -0.4, 0.6}, 0.01, 4), std::invalid_argument);
  CHECK_THROWS_AS(DelayBank({0.2, 0.4}, 0.01, 4), std::invalid_argument);
  CHECK_THROWS_AS(DelayBank({0.001, 0.4, 0.6}, 0.01, 4), std::invalid_argument);
  CHECK_THROWS_AS(DelayBank({0.2, 0.4, 0.6}, 0.0, 4), std::invalid_argument);
}

TEST_CASE("extension before and after t0") {
  DelayBank bank({0.2, 0.4, 0.6}, 0.01, 4);
  for (int k = 0; k < 60; ++k) {
    const ExtendedRegression ext = extend(constant_frame(0.01 * k), bank);
    CHECK_FALSE(ext.valid);
    CHECK(mix(ext).omega == 0.0);
    CHECK(mix(ext).z.isZero(0.0));
    if (k < 20) CHECK(ext.omega_f.bottomRows(3).isZero(0.0));
  }
  const ExtendedRegression ext = extend(constant_frame(0.6), bank);
  CHECK(ext.valid);
  CHECK(ext.omega_f.rows() == 4);
  CHECK(ext.omega_f.cols() == 4);
  for (Eigen::Index r = 1; r < 4; ++r) CHECK(ext.omega_f.row(r) == ext.omega_f.row(0));
  CHECK(mix(ext).omega == 0.0);
}

TEST_CASE("rows carry the delayed frames") {
  DelayBank bank({0.02, 0.03}, 0.01, 3);
  ExtendedRegression ext;
  for (int k = 0; k < 10; ++k) {
    RegressionFrame f;
    f.t = 0.01 * k;
    f.z_bar = k;
    f.omega_bar = Eigen::Vector3d(k, 10.0 * k, 100.0 * k);
    f.output_taps = 1;
    ext = bank.push(f);
  }
  CHECK(ext.z_f == Eigen::Vector3d(9, 7, 6));
  CHECK(ext.omega_f(1, 1) == 70.0);
  CHECK(ext.omega_f(2, 2) == 600.0);
}

TEST_CASE("adjugate and determinant") {
  SUBCASE("identity") {
    const AdjugateDet ad = adjugate_det(Eigen::MatrixXd::Identity(4, 4));
    CHECK(ad.determinant == 1.0);
    CHECK(ad.adjugate == Eigen::MatrixXd::Identity(4, 4));
  }
  SUBCASE("2x2 closed form") {
    Eigen::MatrixXd M(2, 2);
    M << 1, 2, 3, 4;
    const AdjugateDet ad = adjugate_det(M);
    Eigen::MatrixXd adj(2, 2);
    adj << 4, -2, -3, 1;
    CHECK(ad.determinant == -2.0);
    CHECK(ad.adjugate == adj);
  }
  SUBCASE("1x1") {
    const AdjugateDet ad = adjugate_det(Eigen::MatrixXd::Constant(1, 1, 7.0));
    CHECK(ad.determinant == 7.0);
    CHECK(ad.adjugate(0, 0) == 1.0);
  }
  SUBCASE("singular matrices still have an adjugate") {
    Eigen::MatrixXd M(3, 3);
    M << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const AdjugateDet ad = adjugate_det(M);
    CHECK(ad.determinant == doctest::Approx(0.0));
    CHECK((ad.adjugate - oracle::leibniz_adjugate(M)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_FALSE(ad.adjugate.isZero());
  }
  SUBCASE("matches the permutation expansion") {
    std::mt19937_64 rng(11);
    for (Eigen::Index n = 2; n <= 6; ++n) {
      for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXd M = random_matrix(rng, n, 1.0);
        const AdjugateDet ad = adjugate_det(M);
        CHECK(ad.determinant == doctest::Approx(oracle::leibniz_det(M)).epsilon(1e-10));
        CHECK((ad.adjugate - oracle::leibniz_adjugate(M)).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
  SUBCASE("random 4x4 identity residual") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXd M = random_matrix(rng, 4, 1.0);
      const AdjugateDet ad = adjugate_det(M);
      const Eigen::MatrixXd r = ad.adjugate * M - ad.determinant * Eigen::MatrixXd::Identity(4, 4);
      CHECK(inf_norm(r) <= 1e-12 * (1.0 + std::pow(inf_norm(M), 4)));
    }
  }
  SUBCASE("dimension 8 accepted, 9 rejected") {
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd M = random_matrix(rng, 8, 1.0);
    const AdjugateDet ad = adjugate_det(M);
    const Eigen::MatrixXd r = ad.adjugate * M - ad.determinant * Eigen::MatrixXd::Identity(8, 8);
    CHECK(r.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK_THROWS_AS(adjugate_det(Eigen::MatrixXd::Identity(9, 9)), std::invalid_argument);
  }
  SUBCASE("non-square rejected") {
    CHECK_THROWS_AS(adjugate_det(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
  }
}

TEST_CASE("mixing") {
  const MixedRegression m = mix(kTheta, Eigen::MatrixXd::Identity(4, 4));
  CHECK(m.omega == 1.0);
  CHECK(m.z == kTheta);

  Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(4, 4);
  const MixedRegression s = mix(kTheta, singular);
  CHECK(s.omega == 0.0);
  CHECK(s.z.allFinite());
  CHECK_THROWS_AS(mix(Eigen::Vector3d::Zero(), Eigen::MatrixXd::Identity(4, 4)),
                  std::invalid_argument);
}

TEST_CASE("pipeline decouples the regression") {
  for (double amp : {1.0, 10.0, 100.0}) {
    const auto mixed = pipeline(amp, 10.0);
    double worst = 0.0;
    for (const MixedRegression& m : mixed) {
      if (!m.valid || m.t < 1.6) continue;
      worst = std::max(worst, ((m.z - m.omega * kTheta).cwiseAbs().maxCoeff()) /
                                  (1.0 + std::abs(m.omega)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("perturbing one parameter breaks only its component") {
  const auto mixed = pipeline(10.0, 5.0);
  for (Eigen::Index j = 0; j < 4; ++j) {
    Eigen::Vector4d wrong = kTheta;
    wrong(j) += 0.5;
    Eigen::Vector4d worst = Eigen::Vector4d::Zero();
    for (const MixedRegression& m : mixed) {
      if (!m.valid) continue;
      worst = worst.cwiseMax((m.z - m.omega * wrong).cwiseAbs() / (1.0 + std::abs(m.omega)));
    }
    for (Eigen::Index i = 0; i < 4; ++i) {
      if (i == j) {
        CHECK(worst(i) > 1e-6);
      } else {
        CHECK(worst(i) <= 1e-6);
      }
    }
  }
}

TEST_CASE("mixed regressor decays for constant input") {
  for (double amp : {1.0, 10.0, 100.0}) {
    const auto mixed = pipeline(amp, 20.0);
    double peak = 0.0;
    for (const MixedRegression& m : mixed) peak = std::max(peak, std::abs(m.omega));
    CHECK(std::abs(mixed.back().omega) < peak);
    CHECK(peak > 0.0);
  }
}
