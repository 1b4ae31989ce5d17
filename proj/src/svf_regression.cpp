#include "dremnorm/svf_regression.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

#include "dremnorm/errors.hpp"

namespace dremnorm {

namespace {

Eigen::MatrixXd companion(const std::vector<double>& coeffs) {
  const auto n = static_cast<Eigen::Index>(coeffs.size());
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) F(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) F(n - 1, j) = -coeffs[static_cast<std::size_t>(n - 1 - j)];
  return F;
}

}  // namespace

FilterSpec::FilterSpec(std::vector<double> psi) : psi_(std::move(psi)) {
  if (psi_.empty()) throw std::invalid_argument("filter polynomial must have order >= 1");
  for (double v : psi_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite filter coefficient");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion(psi_), false);
  abscissa_ = solver.eigenvalues().real().maxCoeff();
  if (!(abscissa_ < 0.0)) {
    std::ostringstream msg;
    msg << "filter polynomial Psi(p) is not Hurwitz (root with real part " << abscissa_ << ")";
    throw std::invalid_argument(msg.str());
  }
}

FilterBank::FilterBank(FilterSpec spec, std::size_t numerator_degree, double t_start)
    : spec_(std::move(spec)), m_(numerator_degree), t_start_(t_start), F_(companion(spec_.psi())) {
  if (m_ >= spec_.order()) {
    throw std::invalid_argument("numerator degree must be below the filter order (m < n)");
  }
  const auto n = static_cast<Eigen::Index>(spec_.order());
  su_ = Eigen::VectorXd::Zero(n);
  sy_ = Eigen::VectorXd::Zero(n);
}

RegressionFrame FilterBank::step(double u, double y, double dt) {
  if (!std::isfinite(u) || !std::isfinite(y)) {
    std::ostringstream msg;
    msg << "non-finite filter input at t=" << time();
    throw NumericalError(msg.str());
  }
  const auto n = static_cast<Eigen::Index>(spec_.order());
  const auto m = static_cast<Eigen::Index>(m_);

  RegressionFrame frame;
  if (!(dt > 0.0)) throw std::invalid_argument("filter step dt must be positive");
  if (steps_ == 0) {
    dt_ = dt;
  } else if (dt != dt_) {
    throw std::invalid_argument("filter bank step size must stay constant");
  }
  frame.t = time();
  frame.output_taps = spec_.order();
  frame.omega_bar.resize(m + 1 + n);
  // omega_bar_1 = [p^m/Psi ... 1/Psi] u
  for (Eigen::Index i = 0; i <= m; ++i) frame.omega_bar(i) = su_(m - i);
  // omega_bar_2 = -[p^{n-1}/Psi ... 1/Psi] y
  for (Eigen::Index i = 0; i < n; ++i) frame.omega_bar(m + 1 + i) = -sy_(n - 1 - i);

  frame.z_bar = y;
  const auto& psi = spec_.psi();
  for (Eigen::Index i = 0; i < n; ++i) {
    frame.z_bar += psi[static_cast<std::size_t>(i)] * frame.omega_bar(m + 1 + i);
  }

  Eigen::VectorXd du = F_ * su_;
  du(n - 1) += u;
  Eigen::VectorXd dy = F_ * sy_;
  dy(n - 1) += y;
  su_ += dt * du;
  sy_ += dt * dy;
  ++steps_;
  return frame;
}

FilterBank build_filters(const FilterSpec& spec, std::size_t numerator_degree) {
  return FilterBank(spec, numerator_degree);
}

RegressionFrame filter_step(FilterBank& bank, double u_k, double y_k, double dt) {
  return bank.step(u_k, y_k, dt);
}

}  // namespace dremnorm
