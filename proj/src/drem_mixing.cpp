#include "dremnorm/drem_mixing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace dremnorm {

DelayBank::DelayBank(std::vector<double> delays, double dt, std::size_t regressor_size,
                     double t_start)
    : delays_(std::move(delays)), size_(regressor_size), dt_(dt), t_start_(t_start) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("delay bank step dt must be positive");
  if (size_ < 2) throw std::invalid_argument("regressor size must be at least 2");
  if (delays_.size() + 1 != size_) {
    std::ostringstream msg;
    msg << "expected " << size_ - 1 << " delays for a regressor of size " << size_ << ", got "
        << delays_.size();
    throw std::invalid_argument(msg.str());
  }
  for (double d : delays_) {
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("delays must be positive");
    const auto k = std::llround(d / dt_);
    if (k < 1) {
      std::ostringstream msg;
      msg << "delay " << d << " rounds to zero samples at dt=" << dt_;
      throw std::invalid_argument(msg.str());
    }
    const double snapped = static_cast<double>(k) * dt_;
    if (std::abs(snapped - d) > 1e-9 * std::max(1.0, d)) {
      std::ostringstream msg;
      msg << "delay " << d << " rounded to grid value " << snapped;
      warnings_.push_back(msg.str());
    }
    steps_.push_back(static_cast<std::size_t>(k));
  }
  auto sorted = steps_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("delays must be distinct on the sample grid");
  }
  max_steps_ = sorted.back();
  history_.resize(max_steps_ + 1);
}

ExtendedRegression DelayBank::push(const RegressionFrame& frame) {
  if (static_cast<std::size_t>(frame.omega_bar.size()) != size_) {
    throw std::invalid_argument("regression frame size does not match the delay bank");
  }
  const std::size_t cap = history_.size();
  history_[pushed_ % cap] = frame;

  const auto n = static_cast<Eigen::Index>(size_);
  ExtendedRegression ext;
  ext.t = frame.t;
  ext.z_f = Eigen::VectorXd::Zero(n);
  ext.omega_f = Eigen::MatrixXd::Zero(n, n);
  ext.z_f(0) = frame.z_bar;
  ext.omega_f.row(0) = frame.omega_bar.transpose();
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const std::size_t k = steps_[i];
    if (pushed_ < k) continue;  // zero-filled before the delay line fills
    const RegressionFrame& past = history_[(pushed_ - k) % cap];
    const auto row = static_cast<Eigen::Index>(i + 1);
    ext.z_f(row) = past.z_bar;
    ext.omega_f.row(row) = past.omega_bar.transpose();
  }
  ext.valid = pushed_ >= max_steps_;
  ++pushed_;
  return ext;
}

ExtendedRegression extend(const RegressionFrame& frame_now, DelayBank& bank) {
  return bank.push(frame_now);
}

AdjugateDet adjugate_det(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("adjugate requires a square matrix");
  const Eigen::Index n = M.rows();
  if (n > kMaxAdjugateDim) {
    std::ostringstream msg;
    msg << "adjugate_det supports dimension <= " << kMaxAdjugateDim << ", got " << n;
    throw std::invalid_argument(msg.str());
  }
  if (!M.allFinite()) throw std::invalid_argument("adjugate requires finite entries");

  AdjugateDet out;
  if (n == 0) {
    out.adjugate.resize(0, 0);
    out.determinant = 1.0;
    return out;
  }
  if (n == 1) {
    out.adjugate = Eigen::MatrixXd::Ones(1, 1);
    out.determinant = M(0, 0);
    return out;
  }

  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> minors(std::size_t{1} << n);
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(n - 1));
  Eigen::MatrixXd cof(n, n);

  for (Eigen::Index skip = 0; skip < n; ++skip) {
    for (Eigen::Index r = 0, k = 0; r < n; ++r) {
      if (r != skip) rows[static_cast<std::size_t>(k++)] = r;
    }
    // minors[mask]: determinant of rows[0..|mask|-1] x columns in mask,
    // expanded along its last row.
    minors[0] = 1.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const int p = std::popcount(mask);
      if (p > n - 1) continue;
      const Eigen::Index row = rows[static_cast<std::size_t>(p - 1)];
      double acc = 0.0;
      int pos = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        const std::uint32_t bit = 1u << c;
        if (!(mask & bit)) continue;
        const double term = M(row, c) * minors[mask ^ bit];
        acc += ((p - 1 + pos) % 2 == 0) ? term : -term;
        ++pos;
      }
      minors[mask] = acc;
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const double minor = minors[full ^ (1u << c)];
      cof(skip, c) = ((skip + c) % 2 == 0) ? minor : -minor;
    }
  }

  out.adjugate = cof.transpose();
  out.determinant = M.row(0).dot(cof.row(0));
  return out;
}

MixedRegression mix(const Eigen::VectorXd& z_f, const Eigen::MatrixXd& omega_f) {
  if (z_f.size() != omega_f.rows()) {
    throw std::invalid_argument("extended regression dimensions disagree");
  }
  const AdjugateDet ad = adjugate_det(omega_f);
  MixedRegression out;
  out.omega = ad.determinant;
  out.z = ad.adjugate * z_f;
  out.valid = true;
  return out;
}

MixedRegression mix(const ExtendedRegression& extended) {
  MixedRegression out;
  out.t = extended.t;
  if (!extended.valid) {
    out.z = Eigen::VectorXd::Zero(extended.z_f.size());
    return out;
  }
  out = mix(extended.z_f, extended.omega_f);
  out.t = extended.t;
  return out;
}

}  // namespace dremnorm
