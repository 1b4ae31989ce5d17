#include "dremnorm/excitation_normalizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dremnorm {

double Eta::value() const {
  if (neg_inf_) throw std::logic_error("eta is -inf (omega == 0)");
  return value_;
}

NumericOrder numeric_order(double omega) {
  if (!std::isfinite(omega)) throw std::invalid_argument("numeric_order requires finite omega");
  NumericOrder out;
  out.sign = omega >= 0.0 ? 1 : -1;
  out.eta = omega == 0.0 ? Eta::neg_inf() : Eta::finite(std::log10(std::abs(omega)));
  return out;
}

double saturate(Eta eta, double eta_min) {
  if (!std::isfinite(eta_min)) throw std::invalid_argument("eta_min must be finite");
  if (eta.is_neg_inf()) return eta_min;
  const double e = eta.value();
  return e <= eta_min ? eta_min : e;
}

double normalization_gain(double omega, const NormalizerConfig& cfg) {
  const NumericOrder order = numeric_order(omega);
  if (order.eta.is_neg_inf()) return 0.0;
  if (order.eta.value() > cfg.eta_min) return 1.0 / omega;
  return order.sign * std::pow(10.0, -cfg.eta_min);
}

NormalizedRegression normalize(const MixedRegression& mixed, const NormalizerConfig& cfg) {
  if (!mixed.valid) throw std::invalid_argument("normalize requires a valid mixed regression");
  if (!std::isfinite(cfg.eta_min)) throw std::invalid_argument("eta_min must be finite");

  NormalizedRegression out;
  out.t = mixed.t;
  const NumericOrder order = numeric_order(mixed.omega);
  if (order.eta.is_neg_inf()) {
    out.phi = 0.0;
    out.Y = Eigen::VectorXd::Zero(mixed.z.size());
    return out;
  }
  const double eta = order.eta.value();
  if (eta <= cfg.eta_min) {
    out.phi = std::pow(10.0, eta - cfg.eta_min);
    out.Y = mixed.z * (order.sign * std::pow(10.0, -cfg.eta_min));
  } else {
    out.phi = 1.0;
    // sgn(omega) 10^{-eta} == 1 / omega
    out.Y = mixed.z / mixed.omega;
  }
  return out;
}

const std::optional<Eigen::VectorXd>& FiniteTimeRetriever::feed(
    const NormalizedRegression& sample) {
  if (!estimate_ && sample.phi == 1.0) {
    estimate_ = sample.Y;
    t_k_ = sample.t;
  }
  return estimate_;
}

std::optional<Eigen::VectorXd> finite_time_retrieve(
    std::span<const NormalizedRegression> stream) {
  FiniteTimeRetriever retriever;
  for (const auto& sample : stream) {
    if (retriever.feed(sample)) break;
  }
  return retriever.estimate();
}

}  // namespace dremnorm
