#include "dremnorm/estimators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dremnorm/errors.hpp"

namespace dremnorm {

namespace {

void check_state(const EstimatorState& state, LoopVariant expected, Eigen::Index target_size) {
  if (state.variant != expected) {
    std::ostringstream msg;
    msg << "estimator variant " << to_string(state.variant) << " stepped as "
        << to_string(expected);
    throw std::invalid_argument(msg.str());
  }
  if (state.theta_hat.size() != target_size) {
    throw std::invalid_argument("estimator size does not match the regression");
  }
}

// theta_hat_i <- theta_hat_i - dt * gamma * gain * (theta_hat_i * rho - target_i)
void gradient_update(EstimatorState& state, double gain, double rho,
                     const Eigen::VectorXd& target, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("estimator step dt must be positive");
  if (gain == 0.0) return;
  const double k = dt * state.gamma * gain;
  for (Eigen::Index i = 0; i < state.theta_hat.size(); ++i) {
    const double next = state.theta_hat(i) - k * (state.theta_hat(i) * rho - target(i));
    if (!std::isfinite(next)) {
      std::ostringstream msg;
      msg << to_string(state.variant) << " estimator produced a non-finite value in component "
          << i;
      throw NumericalError(msg.str());
    }
    state.theta_hat(i) = next;
  }
}

}  // namespace

std::string_view to_string(LoopVariant variant) {
  switch (variant) {
    case LoopVariant::Plain:
      return "plain";
    case LoopVariant::NormExcitation:
      return "norm_excitation";
    case LoopVariant::NormClassical:
      return "norm_classical";
  }
  return "unknown";
}

LoopVariant loop_variant_from_string(std::string_view name) {
  if (name == "plain") return LoopVariant::Plain;
  if (name == "norm_excitation") return LoopVariant::NormExcitation;
  if (name == "norm_classical") return LoopVariant::NormClassical;
  throw std::invalid_argument("unknown loop variant '" + std::string(name) + "'");
}

EstimatorState EstimatorState::make(LoopVariant variant, double gamma, Eigen::Index size) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("adaptation gain must be positive");
  }
  return EstimatorState{variant, gamma, Eigen::VectorXd::Zero(size), false};
}

EstimatorState step_plain(EstimatorState state, double omega, const Eigen::VectorXd& z,
                          double dt) {
  check_state(state, LoopVariant::Plain, z.size());
  if (!state.started) return state;
  gradient_update(state, omega, omega, z, dt);
  return state;
}

EstimatorState step_norm_excitation(EstimatorState state, const NormalizedRegression& normalized,
                                    double dt) {
  check_state(state, LoopVariant::NormExcitation, normalized.Y.size());
  if (!state.started) return state;
  gradient_update(state, normalized.phi, normalized.phi, normalized.Y, dt);
  return state;
}

EstimatorState step_norm_classical(EstimatorState state, double omega, const Eigen::VectorXd& z,
                                   double dt) {
  check_state(state, LoopVariant::NormClassical, z.size());
  if (!state.started) return state;
  gradient_update(state, omega / (1.0 + omega * omega), omega, z, dt);
  return state;
}

EstimatorState advance(EstimatorState state, const MixedRegression& mixed,
                       const NormalizedRegression& normalized, double dt) {
  if (!mixed.valid) return state;
  state.started = true;
  switch (state.variant) {
    case LoopVariant::Plain:
      return step_plain(std::move(state), mixed.omega, mixed.z, dt);
    case LoopVariant::NormExcitation:
      return step_norm_excitation(std::move(state), normalized, dt);
    case LoopVariant::NormClassical:
      return step_norm_classical(std::move(state), mixed.omega, mixed.z, dt);
  }
  return state;
}

}  // namespace dremnorm
