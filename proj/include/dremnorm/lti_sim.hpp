#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace dremnorm {

/// Strictly proper SISO plant y = b(p)/a(p) u.
///
/// `num` holds [b_m ... b_0]; `den` holds [a_{n-1} ... a_0] and the leading
/// p^n term of a(p) is implicit (monic).
struct TransferFunction {
  std::vector<double> num;
  std::vector<double> den;

  std::size_t order() const { return den.size(); }
  std::size_t numerator_degree() const { return num.empty() ? 0 : num.size() - 1; }

  /// Throws std::invalid_argument unless 1 <= n, num non-empty and m < n.
  void validate() const;

  /// Parameter vector in regression order: [b_m ... b_0, a_{n-1} ... a_0].
  Eigen::VectorXd parameters() const;
};

struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::RowVectorXd c;
};

/// Uniformly sampled scalar signal; sample k sits at t_start + k * dt.
struct SampledSignal {
  double dt = 0.01;
  double t_start = 0.0;
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double time(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }

  void validate() const;
};

/// Controllable canonical form: companion A, b = e_n, c = [b_0 ... b_m 0 ...].
StateSpace realize_state_space(const TransferFunction& tf);

/// Forward-Euler simulation with zero initial state.
SampledSignal simulate(const TransferFunction& tf, const SampledSignal& u);

/// Forward-Euler simulation: x_{k+1} = x_k + dt (A x_k + b u_k), y_k = c x_k.
/// Throws NumericalError naming the time at which the state diverged.
SampledSignal simulate(const TransferFunction& tf, const SampledSignal& u,
                       const Eigen::VectorXd& x0);

/// Constant input of round(duration / dt) samples.
SampledSignal make_step_input(double amplitude, double dt, double duration);

/// Adds uniform noise in [-amplitude, amplitude], reproducible from `seed`.
SampledSignal add_noise(const SampledSignal& y, double noise_amplitude, std::uint64_t seed);

}  // namespace dremnorm
