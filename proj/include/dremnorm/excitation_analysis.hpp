#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dremnorm/lti_sim.hpp"

namespace dremnorm {

/// Excitation measures of one scalar regressor over [t_s, t_s + T].
struct ExcitationReport {
  double t_s = 0.0;
  double T = 0.0;
  /// Integral of omega^2.
  double alpha = 0.0;
  /// Integral of phi^2, in [0, T].
  double phi_energy = 0.0;
  /// Integral of omega^2 / (1 + omega^2).
  double classical_energy = 0.0;
  std::optional<double> eta_min;
  /// Start of the sustained eta <= eta_min tail, when the window has one.
  std::optional<double> T_j;
  /// Lower bound on the normalized excitation (T_j - t_s for a mixed regime).
  std::optional<double> delta_min;
};

/// Time at which the decimal order ceil(log10|omega|) first takes a new value.
struct DecadeCrossing {
  double t = 0.0;
  int order = 0;
};

struct OrderChanges {
  std::optional<double> T_j;
  std::vector<DecadeCrossing> crossings;
};

enum class BoundRegime { Plain, NeLow, NeHigh, NeMixed, Classical };

std::string_view to_string(BoundRegime regime);

struct ErrorBounds {
  std::optional<double> lower;
  double upper = 0.0;
};

enum class UbMode { Stepwise, Continuous };

std::string_view to_string(UbMode mode);
UbMode ub_mode_from_string(std::string_view name);

/// Sub-signal on the grid points nearest to t_s and t_s + T (inclusive).
/// Throws std::invalid_argument when the window leaves the data.
SampledSignal window(const SampledSignal& signal, double t_s, double T);

/// Trapezoidal integral of signal^2 over [t_s, t_s + T].
double excitation_level(const SampledSignal& signal, double t_s, double T);

/// Trapezoidal integral of omega^2 / (1 + omega^2) over [t_s, t_s + T].
double classical_excitation_level(const SampledSignal& signal, double t_s, double T);

/// T_j is the first sample from which |omega| <= 10^eta_min holds through the
/// end of the signal, provided the signal is above the floor somewhere before
/// it. Brief dips below the floor do not count.
OrderChanges order_change_times(const SampledSignal& signal, double eta_min);

/// Trapezoidal integral of phi^2; rejects samples outside [0, 1].
double phi_excitation(const SampledSignal& phi, double t_s, double T);

/// Full report over a window. delta_min is filled for a mixed regime
/// (T_j - t_s) and set to T when eta > eta_min throughout.
ExcitationReport build_report(const SampledSignal& omega, const SampledSignal& phi, double t_s,
                              double T, double eta_min);

/// NeHigh, NeLow or NeMixed for the window, or nothing when the regressor
/// climbs back above the floor after dipping (no normalized bound applies).
std::optional<BoundRegime> classify_regime(const SampledSignal& omega, double t_s, double T,
                                           double eta_min);

/// Smallest delta_min of a regressor family; empty if any member lacks one.
std::optional<double> common_delta_min(std::span<const ExcitationReport> reports);

/// Bounds on |theta_tilde_i(t_s + T)| given |theta_tilde_i(t_s)| = theta_err_start.
///
///   Plain      upper e^{-gamma alpha}
///   NeLow      e^{-gamma T} <= . <= e^{-gamma alpha 10^{-2 eta_min}}
///   NeHigh     e^{-gamma T} <= . <= e^{-gamma Delta}, Delta = delta_min or T
///   NeMixed    e^{-gamma T} <= . <= e^{-gamma delta_min}
///   Classical  upper e^{-gamma classical_energy}
ErrorBounds error_bounds(const ExcitationReport& report, double gamma, double theta_err_start,
                         BoundRegime regime);

/// Upper-bound curve parameters for the excitation-normalized loop.
struct UbSpec {
  double gamma = 0.1;
  double delta = 0.7;
  double T = 10.0;
  double t_s = 0.0;
  double theta_err_start = 1.0;
  UbMode mode = UbMode::Stepwise;

  /// Stepwise: theta_err_start e^{-gamma delta k}, k = complete windows since t_s.
  /// Continuous: theta_err_start e^{-gamma delta (t - t_s) / T}.
  double value(double t) const;
  void validate() const;
};

/// UB sampled at t = k dt for k < round(horizon / dt).
SampledSignal ub_curve(double gamma, double delta, double T, double t_s, double theta_err_start,
                       double horizon, UbMode mode, double dt = 0.01);

}  // namespace dremnorm
