#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "dremnorm/drem_mixing.hpp"

namespace dremnorm {

/// Decimal order of magnitude eta = log10|omega|, with an explicit negative
/// infinity for omega = 0 so callers never see a floating -inf.
class Eta {
 public:
  static Eta finite(double value) { return Eta(value, false); }
  static Eta neg_inf() { return Eta(0.0, true); }

  bool is_neg_inf() const { return neg_inf_; }
  /// Throws std::logic_error for the negative-infinity sentinel.
  double value() const;

  bool operator==(const Eta&) const = default;

 private:
  Eta(double value, bool neg_inf) : value_(value), neg_inf_(neg_inf) {}
  double value_;
  bool neg_inf_;
};

/// omega = sign * 10^eta; sign is +1 for omega >= 0.
struct NumericOrder {
  int sign = 1;
  Eta eta = Eta::neg_inf();
};

struct NormalizerConfig {
  double eta_min = -12.0;
};

/// Y = phi * theta with phi in [0, 1].
struct NormalizedRegression {
  double t = 0.0;
  double phi = 0.0;
  Eigen::VectorXd Y;
};

/// Throws std::invalid_argument for NaN or infinite input.
NumericOrder numeric_order(double omega);

/// max(eta, eta_min); the negative-infinity sentinel saturates to eta_min.
double saturate(Eta eta, double eta_min);

/// f(omega) = sgn(omega) 10^{-sat(eta)}; zero for omega = 0.
double normalization_gain(double omega, const NormalizerConfig& cfg);

/// phi = 10^{eta - eta_min} when eta <= eta_min, else 1; Y = z f(omega).
///
/// phi is evaluated from the piecewise form, so omega = 0 gives phi = 0 and
/// Y = 0 instead of 0 * inf. Requires mixed.valid.
NormalizedRegression normalize(const MixedRegression& mixed, const NormalizerConfig& cfg);

/// Latches Y at the first sample with phi == 1.
///
/// In the noise-free case Y(t_k) = theta exactly. With measurement noise the
/// latched value is Y(t_k) = theta + w(t_k) and a single sample can be
/// arbitrarily wrong, so this is a diagnostic, not a substitute for the
/// gradient loops.
class FiniteTimeRetriever {
 public:
  /// Returns the latched estimate once available.
  const std::optional<Eigen::VectorXd>& feed(const NormalizedRegression& sample);

  const std::optional<Eigen::VectorXd>& estimate() const { return estimate_; }
  std::optional<double> latch_time() const { return t_k_; }

 private:
  std::optional<Eigen::VectorXd> estimate_;
  std::optional<double> t_k_;
};

std::optional<Eigen::VectorXd> finite_time_retrieve(std::span<const NormalizedRegression> stream);

}  // namespace dremnorm
