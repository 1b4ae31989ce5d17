#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Leibniz permutation expansion.
inline double leibniz_det(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double det = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= M(i, perm[i]);
    det += (inversions % 2 == 0) ? prod : -prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// adj(M)_{ij} = (-1)^{i+j} det(M without row j and column i), via Leibniz.
inline Eigen::MatrixXd leibniz_adjugate(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.rows();
  Eigen::MatrixXd adj(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::MatrixXd minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = M(r, c);
        }
        ++rr;
      }
      adj(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * leibniz_det(minor);
    }
  }
  return adj;
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature of a continuous-time integrand.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Normalized regressor of A e^{-t} written out from its piecewise definition
/// on the continuous time axis.
inline double phi_of_exp(double amplitude, double t, double eta_min) {
  const double omega = amplitude * std::exp(-t);
  const double eta = std::log10(omega);
  return eta <= eta_min ? std::pow(10.0, eta - eta_min) : 1.0;
}

/// Error ratio of theta_tilde' = -gamma rho(t)^2 theta_tilde over [a, b].
inline double gradient_ratio(const std::function<double(double)>& rho, double gamma, double a,
                             double b) {
  return std::exp(-gamma * integrate([&](double t) { return rho(t) * rho(t); }, a, b));
}

}  // namespace oracle
