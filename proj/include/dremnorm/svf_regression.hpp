#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace dremnorm {

/// Monic filter polynomial Psi(p) = p^n + psi_{n-1} p^{n-1} + ... + psi_0.
///
/// Construction rejects polynomials that are not Hurwitz.
class FilterSpec {
 public:
  /// `psi` = [psi_{n-1} ... psi_0].
  explicit FilterSpec(std::vector<double> psi);

  std::size_t order() const { return psi_.size(); }
  const std::vector<double>& psi() const { return psi_; }

  /// Largest real part over the roots of Psi (negative for a valid spec).
  double spectral_abscissa() const { return abscissa_; }

 private:
  std::vector<double> psi_;
  double abscissa_ = 0.0;
};

/// One sample of the measurable regression z_bar = theta^T omega_bar.
struct RegressionFrame {
  double t = 0.0;
  double z_bar = 0.0;
  /// [omega_bar_1; omega_bar_2], lengths m+1 and n.
  Eigen::VectorXd omega_bar;
  std::size_t output_taps = 0;

  Eigen::VectorXd omega_bar_1() const {
    return omega_bar.head(omega_bar.size() - static_cast<Eigen::Index>(output_taps));
  }
  Eigen::VectorXd omega_bar_2() const {
    return omega_bar.tail(static_cast<Eigen::Index>(output_taps));
  }
};

/// State-variable filters 1/Psi applied to u and y.
///
/// Both chains are companion realizations whose state is
/// [1/Psi, p/Psi, ..., p^{n-1}/Psi] of the filtered signal. A frame is read
/// from the current state before the Euler step, so the discrete filters and
/// the Euler-simulated plant share the same difference operator and the
/// regression identity holds without a discretization residual.
class FilterBank {
 public:
  FilterBank(FilterSpec spec, std::size_t numerator_degree, double t_start = 0.0);

  RegressionFrame step(double u, double y, double dt);

  std::size_t order() const { return spec_.order(); }
  std::size_t numerator_degree() const { return m_; }
  std::size_t regressor_size() const { return m_ + spec_.order() + 1; }
  /// Time of the next frame.
  double time() const { return t_start_ + static_cast<double>(steps_) * dt_; }
  const FilterSpec& spec() const { return spec_; }
  const Eigen::VectorXd& input_state() const { return su_; }
  const Eigen::VectorXd& output_state() const { return sy_; }

 private:
  FilterSpec spec_;
  std::size_t m_;
  double t_start_;
  double dt_ = 0.0;
  std::size_t steps_ = 0;
  Eigen::MatrixXd F_;
  Eigen::VectorXd su_;
  Eigen::VectorXd sy_;
};

FilterBank build_filters(const FilterSpec& spec, std::size_t numerator_degree);

RegressionFrame filter_step(FilterBank& bank, double u_k, double y_k, double dt);

}  // namespace dremnorm
