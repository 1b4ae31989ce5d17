#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "dremnorm/drem_mixing.hpp"
#include "dremnorm/excitation_normalizer.hpp"

namespace dremnorm {

enum class LoopVariant {
  Plain,          // theta_hat' = -gamma omega (theta_hat omega - z)
  NormExcitation, // theta_hat' = -gamma phi (theta_hat phi - Y)
  NormClassical,  // theta_hat' = -gamma omega / (1 + omega^2) (theta_hat omega - z)
};

std::string_view to_string(LoopVariant variant);
/// Accepts the names produced by to_string; throws std::invalid_argument otherwise.
LoopVariant loop_variant_from_string(std::string_view name);

/// Per-component scalar gradient estimator.
///
/// All variants are explicit Euler updates with the simulation step. They are
/// stable only while dt * gamma * rho^2 < 2, rho being the effective regressor
/// (omega, phi or omega / sqrt(1 + omega^2)).
struct EstimatorState {
  LoopVariant variant = LoopVariant::Plain;
  double gamma = 1.0;
  Eigen::VectorXd theta_hat;
  /// Set once the stacked regression becomes valid (t >= t_0).
  bool started = false;

  /// theta_hat(0) = 0, so theta_tilde(0) = -theta.
  static EstimatorState make(LoopVariant variant, double gamma, Eigen::Index size);
};

EstimatorState step_plain(EstimatorState state, double omega, const Eigen::VectorXd& z, double dt);

EstimatorState step_norm_excitation(EstimatorState state, const NormalizedRegression& normalized,
                                    double dt);

EstimatorState step_norm_classical(EstimatorState state, double omega, const Eigen::VectorXd& z,
                                   double dt);

/// Dispatches on state.variant. Invalid samples leave the state untouched;
/// the first valid sample sets `started`.
EstimatorState advance(EstimatorState state, const MixedRegression& mixed,
                       const NormalizedRegression& normalized, double dt);

}  // namespace dremnorm
