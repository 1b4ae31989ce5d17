#include "dremnorm/excitation_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dremnorm {

namespace {

template <typename F>
double trapezoid(const SampledSignal& s, F&& integrand) {
  if (s.size() < 2) return 0.0;
  double acc = 0.5 * (integrand(s.samples.front()) + integrand(s.samples.back()));
  for (std::size_t k = 1; k + 1 < s.size(); ++k) acc += integrand(s.samples[k]);
  return acc * s.dt;
}

}  // namespace

std::string_view to_string(BoundRegime regime) {
  switch (regime) {
    case BoundRegime::Plain:
      return "plain";
    case BoundRegime::NeLow:
      return "ne_low";
    case BoundRegime::NeHigh:
      return "ne_high";
    case BoundRegime::NeMixed:
      return "ne_mixed";
    case BoundRegime::Classical:
      return "classical";
  }
  return "unknown";
}

std::string_view to_string(UbMode mode) {
  return mode == UbMode::Stepwise ? "stepwise" : "continuous";
}

UbMode ub_mode_from_string(std::string_view name) {
  if (name == "stepwise") return UbMode::Stepwise;
  if (name == "continuous") return UbMode::Continuous;
  throw std::invalid_argument("unknown UB mode '" + std::string(name) + "'");
}

SampledSignal window(const SampledSignal& signal, double t_s, double T) {
  signal.validate();
  if (!(T > 0.0)) throw std::invalid_argument("window length T must be positive");
  const double first = (t_s - signal.t_start) / signal.dt;
  const double last = (t_s + T - signal.t_start) / signal.dt;
  const auto i0 = std::llround(first);
  const auto i1 = std::llround(last);
  if (i0 < 0 || i1 >= static_cast<long long>(signal.size())) {
    std::ostringstream msg;
    msg << "window [" << t_s << ", " << t_s + T << "] lies outside the data ["
        << signal.t_start << ", " << signal.time(signal.size() ? signal.size() - 1 : 0) << "]";
    throw std::invalid_argument(msg.str());
  }
  SampledSignal out{signal.dt, signal.time(static_cast<std::size_t>(i0)), {}};
  out.samples.assign(signal.samples.begin() + i0, signal.samples.begin() + i1 + 1);
  return out;
}

double excitation_level(const SampledSignal& signal, double t_s, double T) {
  return trapezoid(window(signal, t_s, T), [](double w) { return w * w; });
}

double classical_excitation_level(const SampledSignal& signal, double t_s, double T) {
  return trapezoid(window(signal, t_s, T), [](double w) { return w * w / (1.0 + w * w); });
}

OrderChanges order_change_times(const SampledSignal& signal, double eta_min) {
  signal.validate();
  if (!std::isfinite(eta_min)) throw std::invalid_argument("eta_min must be finite");
  OrderChanges out;
  std::optional<std::size_t> last_above;
  std::optional<int> previous;
  for (std::size_t k = 0; k < signal.size(); ++k) {
    const double mag = std::abs(signal.samples[k]);
    // eta > eta_min, evaluated on eta itself to match the normalizer's branch
    if (mag != 0.0 && std::log10(mag) > eta_min) last_above = k;
    if (mag == 0.0) continue;
    const int order = static_cast<int>(std::ceil(std::log10(mag)));
    if (previous && *previous != order) out.crossings.push_back({signal.time(k), order});
    previous = order;
  }
  if (last_above && *last_above + 1 < signal.size()) out.T_j = signal.time(*last_above + 1);
  return out;
}

double phi_excitation(const SampledSignal& phi, double t_s, double T) {
  const SampledSignal w = window(phi, t_s, T);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double v = w.samples[k];
    if (v < 0.0 || v > 1.0) {
      std::ostringstream msg;
      msg << "normalized regressor outside [0, 1] at t=" << w.time(k) << ": " << v;
      throw std::invalid_argument(msg.str());
    }
  }
  return trapezoid(w, [](double p) { return p * p; });
}

std::optional<BoundRegime> classify_regime(const SampledSignal& omega, double t_s, double T,
                                           double eta_min) {
  const SampledSignal w = window(omega, t_s, T);
  bool any_above = false;
  bool any_below = false;
  for (double v : w.samples) {
    const bool above = v != 0.0 && std::log10(std::abs(v)) > eta_min;
    any_above |= above;
    any_below |= !above;
  }
  if (!any_below) return BoundRegime::NeHigh;
  if (!any_above) return BoundRegime::NeLow;
  // mixed only if the regressor is above the floor on [t_s, T_j) and below after
  const OrderChanges changes = order_change_times(w, eta_min);
  if (!changes.T_j) return std::nullopt;
  for (std::size_t k = 0; k < w.size() && w.time(k) < *changes.T_j - 0.5 * w.dt; ++k) {
    const double v = w.samples[k];
    if (v == 0.0 || std::log10(std::abs(v)) <= eta_min) return std::nullopt;
  }
  return BoundRegime::NeMixed;
}

ExcitationReport build_report(const SampledSignal& omega, const SampledSignal& phi, double t_s,
                              double T, double eta_min) {
  ExcitationReport report;
  report.t_s = t_s;
  report.T = T;
  report.alpha = excitation_level(omega, t_s, T);
  report.classical_energy = classical_excitation_level(omega, t_s, T);
  report.phi_energy = phi_excitation(phi, t_s, T);
  report.eta_min = eta_min;
  const OrderChanges changes = order_change_times(window(omega, t_s, T), eta_min);
  report.T_j = changes.T_j;
  if (changes.T_j) {
    report.delta_min = *changes.T_j - t_s;
  } else if (classify_regime(omega, t_s, T, eta_min) == BoundRegime::NeHigh) {
    report.delta_min = T;
  }
  return report;
}

std::optional<double> common_delta_min(std::span<const ExcitationReport> reports) {
  std::optional<double> best;
  for (const auto& r : reports) {
    if (!r.delta_min) return std::nullopt;
    best = best ? std::min(*best, *r.delta_min) : *r.delta_min;
  }
  return best;
}

ErrorBounds error_bounds(const ExcitationReport& report, double gamma, double theta_err_start,
                         BoundRegime regime) {
  if (!(gamma > 0.0)) throw std::invalid_argument("adaptation gain must be positive");
  const double e0 = std::abs(theta_err_start);
  ErrorBounds out;
  switch (regime) {
    case BoundRegime::Plain:
      out.upper = std::exp(-gamma * report.alpha) * e0;
      break;
    case BoundRegime::Classical:
      out.upper = std::exp(-gamma * report.classical_energy) * e0;
      break;
    case BoundRegime::NeLow: {
      if (!report.eta_min) throw std::invalid_argument("NE_LOW bounds require eta_min");
      const double amplified = report.alpha * std::pow(10.0, -2.0 * *report.eta_min);
      out.lower = std::exp(-gamma * report.T) * e0;
      out.upper = std::exp(-gamma * amplified) * e0;
      break;
    }
    case BoundRegime::NeHigh: {
      const double delta = report.delta_min.value_or(report.T);
      if (!(delta > 0.0) || delta > report.T) {
        throw std::invalid_argument("NE_HIGH requires 0 < delta <= T");
      }
      out.lower = std::exp(-gamma * report.T) * e0;
      out.upper = std::exp(-gamma * delta) * e0;
      break;
    }
    case BoundRegime::NeMixed:
      if (!report.delta_min) throw std::invalid_argument("NE_MIXED bounds require delta_min");
      out.lower = std::exp(-gamma * report.T) * e0;
      out.upper = std::exp(-gamma * *report.delta_min) * e0;
      break;
  }
  return out;
}

void UbSpec::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("UB gain must be positive");
  if (!(T > 0.0)) throw std::invalid_argument("UB window T must be positive");
  if (!(delta > 0.0) || delta > T) throw std::invalid_argument("UB delta must lie in (0, T]");
}

double UbSpec::value(double t) const {
  if (t < t_s) return theta_err_start;
  const double windows = (t - t_s) / T;
  if (mode == UbMode::Stepwise) {
    const double k = std::floor(windows + 1e-9);
    return theta_err_start * std::exp(-gamma * delta * k);
  }
  return theta_err_start * std::exp(-gamma * delta * windows);
}

SampledSignal ub_curve(double gamma, double delta, double T, double t_s, double theta_err_start,
                       double horizon, UbMode mode, double dt) {
  const UbSpec spec{gamma, delta, T, t_s, theta_err_start, mode};
  spec.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("UB sample step must be positive");
  const auto count = horizon > 0.0 ? static_cast<std::size_t>(std::llround(horizon / dt)) : 0;
  SampledSignal out{dt, 0.0, std::vector<double>(count)};
  for (std::size_t k = 0; k < count; ++k) out.samples[k] = spec.value(out.time(k));
  return out;
}

}  // namespace dremnorm
