#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dremnorm/svf_regression.hpp"

namespace dremnorm {

/// Stacked regression z_f = omega_f theta built from the current frame and
/// its delayed copies.
struct ExtendedRegression {
  double t = 0.0;
  Eigen::VectorXd z_f;
  Eigen::MatrixXd omega_f;
  /// False until the largest delay has filled (t < t_0).
  bool valid = false;
};

/// Scalar regressions z_i = omega * theta_i after adjugate mixing.
struct MixedRegression {
  double t = 0.0;
  double omega = 0.0;
  Eigen::VectorXd z;
  bool valid = false;
};

/// Pure delays (.)(t - d_i) realized on the sample grid.
///
/// Delays are rounded to integer multiples of dt; any rounding is recorded in
/// warnings(). All delays share one frame history of length max_i d_i / dt.
class DelayBank {
 public:
  DelayBank(std::vector<double> delays, double dt, std::size_t regressor_size,
            double t_start = 0.0);

  /// Records `frame` and returns the stacked regression at frame.t.
  ExtendedRegression push(const RegressionFrame& frame);

  const std::vector<double>& delays() const { return delays_; }
  const std::vector<std::size_t>& delay_steps() const { return steps_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::size_t regressor_size() const { return size_; }
  double dt() const { return dt_; }
  /// First instant at which every delayed row carries recorded data.
  double t0() const { return t_start_ + static_cast<double>(max_steps_) * dt_; }

 private:
  std::vector<double> delays_;
  std::vector<std::size_t> steps_;
  std::vector<std::string> warnings_;
  std::size_t size_;
  double dt_;
  double t_start_;
  std::size_t max_steps_ = 0;
  std::size_t pushed_ = 0;
  std::vector<RegressionFrame> history_;
};

ExtendedRegression extend(const RegressionFrame& frame_now, DelayBank& bank);

struct AdjugateDet {
  Eigen::MatrixXd adjugate;
  double determinant = 0.0;
};

/// Largest dimension accepted by adjugate_det.
inline constexpr Eigen::Index kMaxAdjugateDim = 8;

/// Adjugate and determinant by cofactor (Laplace) expansion.
///
/// Defined for singular matrices. Minors are shared through a table indexed
/// by column subsets, so each cofactor is an exact Laplace sum without
/// pivoting. Dimensions above kMaxAdjugateDim are rejected.
AdjugateDet adjugate_det(const Eigen::MatrixXd& M);

MixedRegression mix(const Eigen::VectorXd& z_f, const Eigen::MatrixXd& omega_f);

/// Mixes a stacked regression; invalid inputs give omega = 0, z = 0.
MixedRegression mix(const ExtendedRegression& extended);

}  // namespace dremnorm
