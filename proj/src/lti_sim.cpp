#include "dremnorm/lti_sim.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dremnorm/errors.hpp"

namespace dremnorm {

namespace {

constexpr double kDivergenceThreshold = 1e150;

}  // namespace

void TransferFunction::validate() const {
  if (den.empty()) {
    throw std::invalid_argument("transfer function denominator must have degree >= 1");
  }
  if (num.empty()) {
    throw std::invalid_argument("transfer function numerator must be non-empty");
  }
  if (num.size() > den.size()) {
    std::ostringstream msg;
    msg << "transfer function must be strictly proper: numerator degree " << num.size() - 1
        << " >= denominator degree " << den.size();
    throw std::invalid_argument(msg.str());
  }
  for (double v : num) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite numerator coefficient");
  }
  for (double v : den) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite denominator coefficient");
  }
}

Eigen::VectorXd TransferFunction::parameters() const {
  Eigen::VectorXd theta(num.size() + den.size());
  for (std::size_t i = 0; i < num.size(); ++i) theta(static_cast<Eigen::Index>(i)) = num[i];
  for (std::size_t i = 0; i < den.size(); ++i) {
    theta(static_cast<Eigen::Index>(num.size() + i)) = den[i];
  }
  return theta;
}

void SampledSignal::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("sample step dt must be positive and finite");
  }
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!std::isfinite(samples[k])) {
      std::ostringstream msg;
      msg << "non-finite sample at t=" << time(k);
      throw std::invalid_argument(msg.str());
    }
  }
}

StateSpace realize_state_space(const TransferFunction& tf) {
  tf.validate();
  const auto n = static_cast<Eigen::Index>(tf.order());
  const auto m = static_cast<Eigen::Index>(tf.numerator_degree());

  StateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  // den[n-1-j] is the coefficient of p^j
  for (Eigen::Index j = 0; j < n; ++j) ss.A(n - 1, j) = -tf.den[static_cast<std::size_t>(n - 1 - j)];

  ss.b = Eigen::VectorXd::Zero(n);
  ss.b(n - 1) = 1.0;

  ss.c = Eigen::RowVectorXd::Zero(n);
  for (Eigen::Index j = 0; j <= m; ++j) ss.c(j) = tf.num[static_cast<std::size_t>(m - j)];
  return ss;
}

SampledSignal simulate(const TransferFunction& tf, const SampledSignal& u) {
  return simulate(tf, u, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tf.order())));
}

SampledSignal simulate(const TransferFunction& tf, const SampledSignal& u,
                       const Eigen::VectorXd& x0) {
  const StateSpace ss = realize_state_space(tf);
  u.validate();
  if (x0.size() != ss.A.rows()) {
    throw std::invalid_argument("initial state dimension must equal the plant order");
  }

  SampledSignal y{u.dt, u.t_start, std::vector<double>(u.size())};
  Eigen::VectorXd x = x0;
  Eigen::VectorXd dx(x.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    y.samples[k] = ss.c.dot(x);
    dx.noalias() = ss.A * x;
    dx += ss.b * u.samples[k];
    x += u.dt * dx;
    const double mag = x.cwiseAbs().maxCoeff();
    if (!std::isfinite(mag) || mag > kDivergenceThreshold) {
      std::ostringstream msg;
      msg << "plant state diverged at t=" << u.time(k + 1);
      throw NumericalError(msg.str());
    }
  }
  return y;
}

SampledSignal make_step_input(double amplitude, double dt, double duration) {
  if (!(duration > 0.0)) throw std::invalid_argument("step input duration must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("sample step dt must be positive");
  const auto count = static_cast<std::size_t>(std::llround(duration / dt));
  return SampledSignal{dt, 0.0, std::vector<double>(count, amplitude)};
}

SampledSignal add_noise(const SampledSignal& y, double noise_amplitude, std::uint64_t seed) {
  if (!(noise_amplitude >= 0.0)) throw std::invalid_argument("noise amplitude must be >= 0");
  SampledSignal out = y;
  if (noise_amplitude == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-noise_amplitude, noise_amplitude);
  for (double& v : out.samples) v += dist(rng);
  return out;
}

}  // namespace dremnorm
