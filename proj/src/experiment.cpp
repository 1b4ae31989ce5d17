#include "dremnorm/experiment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "dremnorm/drem_mixing.hpp"
#include "dremnorm/errors.hpp"
#include "dremnorm/excitation_normalizer.hpp"
#include "dremnorm/svf_regression.hpp"

namespace dremnorm {

namespace {

// Runs `fn`, prefixing any error message with the stage while keeping the
// exception category (numerical vs. argument) intact.
template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(stage + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(stage + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(stage + ": " + e.what());
  }
}

std::string label_of(const LoopSpec& spec) {
  return spec.label.empty() ? std::string(to_string(spec.variant)) : spec.label;
}

double residual_of(const MixedRegression& mixed, const Eigen::VectorXd& theta) {
  if (!mixed.valid) return 0.0;
  const double worst = (mixed.z - mixed.omega * theta).cwiseAbs().maxCoeff();
  return worst / (1.0 + std::abs(mixed.omega));
}

}  // namespace

SampledSignal AmplitudeRun::omega_signal(double dt) const {
  return SampledSignal{dt, t.empty() ? 0.0 : t.front(), omega};
}

SampledSignal AmplitudeRun::phi_signal(double dt) const {
  return SampledSignal{dt, t.empty() ? 0.0 : t.front(), phi};
}

bool ExperimentResult::empty() const {
  for (const auto& run : runs) {
    if (!run.t.empty()) return false;
  }
  return true;
}

std::vector<LoopSpec> default_loops(const ExperimentConfig& cfg) {
  std::vector<LoopSpec> loops;
  for (auto v : {LoopVariant::Plain, LoopVariant::NormExcitation, LoopVariant::NormClassical}) {
    loops.push_back(LoopSpec{v, cfg.gains[v], std::string(to_string(v))});
  }
  return loops;
}

AmplitudeRun run_amplitude(const ExperimentConfig& cfg, double u_amp, std::size_t index,
                           std::span<const LoopSpec> loops) {
  std::ostringstream tag;
  tag << " (u=" << u_amp << ")";
  const std::size_t n = cfg.plant.order();
  const std::size_t m = cfg.plant.numerator_degree();
  const Eigen::VectorXd theta = cfg.plant.parameters();

  AmplitudeRun run;
  run.u_amp = u_amp;
  const auto samples = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.dt));

  SampledSignal u{cfg.dt, 0.0, std::vector<double>(samples, u_amp)};
  const SampledSignal y = in_stage("simulate" + tag.str(), [&] { return simulate(cfg.plant, u); });
  const SampledSignal y_meas = in_stage("noise" + tag.str(), [&] {
    return add_noise(y, cfg.noise_amplitude, cfg.seed + 0x9E3779B97F4A7C15ull * (index + 1));
  });

  FilterBank filters = in_stage("filters" + tag.str(),
                                [&] { return FilterBank(FilterSpec(cfg.psi), m); });
  DelayBank delays = in_stage("delays" + tag.str(), [&] {
    return DelayBank(cfg.delays, cfg.dt, m + n + 1);
  });
  run.t0 = delays.t0();
  run.warnings = delays.warnings();
  const NormalizerConfig norm_cfg{cfg.eta_min};

  std::vector<EstimatorState> states;
  for (const auto& spec : loops) {
    states.push_back(EstimatorState::make(spec.variant, spec.gamma,
                                          static_cast<Eigen::Index>(theta.size())));
    run.loops.push_back(LoopTrajectory{spec, {}, {}, {}});
    run.loops.back().spec.label = label_of(spec);
  }
  const double err0 = theta.norm();

  FiniteTimeRetriever retriever;
  run.t.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const RegressionFrame frame = in_stage("regression" + tag.str(), [&] {
      return filters.step(u.samples[k], y_meas.samples[k], cfg.dt);
    });
    const MixedRegression mixed = in_stage("mixing" + tag.str(), [&] {
      return mix(delays.push(frame));
    });
    NormalizedRegression normalized;
    normalized.t = mixed.t;
    normalized.Y = Eigen::VectorXd::Zero(theta.size());
    if (mixed.valid) {
      normalized = in_stage("normalize" + tag.str(), [&] { return normalize(mixed, norm_cfg); });
      retriever.feed(normalized);
    }

    run.t.push_back(u.time(k));
    run.omega.push_back(mixed.omega);
    run.phi.push_back(normalized.phi);
    run.valid.push_back(mixed.valid ? 1 : 0);
    run.residual.push_back(residual_of(mixed, theta));

    for (std::size_t l = 0; l < states.size(); ++l) {
      LoopTrajectory& traj = run.loops[l];
      traj.theta_hat.push_back(states[l].theta_hat);
      traj.err_norm.push_back((states[l].theta_hat - theta).norm());
      if (traj.spec.variant == LoopVariant::NormExcitation) {
        const UbSpec ub{traj.spec.gamma, cfg.delta_for_ub, cfg.ub_window, cfg.ub_t_s, err0,
                        cfg.ub_mode};
        traj.ub.push_back(ub.value(run.t.back()));
      }
      states[l] = in_stage("estimator " + traj.spec.label + tag.str(), [&] {
        return advance(std::move(states[l]), mixed, normalized, cfg.dt);
      });
    }
  }
  run.retrieved = retriever.estimate();
  run.retrieved_at = retriever.latch_time();

  // Excitation report over the first bound window that starts at or after t_0.
  const double t_s = std::max(cfg.ub_t_s, run.t0);
  if (!run.t.empty() && t_s + cfg.ub_window <= run.t.back() + 0.5 * cfg.dt) {
    run.report = in_stage("excitation report" + tag.str(), [&] {
      return build_report(run.omega_signal(cfg.dt), run.phi_signal(cfg.dt), t_s, cfg.ub_window,
                          cfg.eta_min);
    });
  }
  return run;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.parameter_count = cfg.plant.num.size() + cfg.plant.den.size();
  result.dt = cfg.dt;
  const auto loops = default_loops(cfg);
  for (std::size_t i = 0; i < cfg.input_amplitudes.size(); ++i) {
    result.runs.push_back(run_amplitude(cfg, cfg.input_amplitudes[i], i, loops));
  }
  return result;
}

ExperimentResult run_sweep(const ExperimentConfig& cfg, std::span<const double> gammas) {
  cfg.validate();
  if (gammas.empty()) throw ConfigError("gamma sweep must not be empty");
  std::vector<LoopSpec> loops;
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("gamma sweep values must be > 0");
    std::ostringstream label;
    label << "norm_excitation@" << g;
    loops.push_back(LoopSpec{LoopVariant::NormExcitation, g, label.str()});
  }
  ExperimentResult result;
  result.parameter_count = cfg.plant.num.size() + cfg.plant.den.size();
  result.dt = cfg.dt;
  for (std::size_t i = 0; i < cfg.input_amplitudes.size(); ++i) {
    result.runs.push_back(run_amplitude(cfg, cfg.input_amplitudes[i], i, loops));
  }
  return result;
}

ScalarRun run_scalar_loops(const SampledSignal& omega, const ScalarLoopSettings& settings) {
  omega.validate();
  if (settings.theta.size() == 0) throw std::invalid_argument("theta must not be empty");
  const SampledSignal w = window(omega, settings.t_s, settings.T);
  const NormalizerConfig norm_cfg{settings.eta_min};
  const Eigen::VectorXd& theta = settings.theta;

  ScalarRun out;
  AmplitudeRun& run = out.run;
  run.t0 = w.t_start;

  std::vector<EstimatorState> states;
  for (const auto& spec : settings.loops) {
    states.push_back(EstimatorState::make(spec.variant, spec.gamma, theta.size()));
    states.back().started = true;
    run.loops.push_back(LoopTrajectory{spec, {}, {}, {}});
    run.loops.back().spec.label = label_of(spec);
  }

  for (std::size_t k = 0; k < w.size(); ++k) {
    MixedRegression mixed{w.time(k), w.samples[k], w.samples[k] * theta, true};
    const NormalizedRegression normalized = normalize(mixed, norm_cfg);
    run.t.push_back(mixed.t);
    run.omega.push_back(mixed.omega);
    run.phi.push_back(normalized.phi);
    run.valid.push_back(1);
    run.residual.push_back(0.0);
    for (std::size_t l = 0; l < states.size(); ++l) {
      run.loops[l].theta_hat.push_back(states[l].theta_hat);
      run.loops[l].err_norm.push_back((states[l].theta_hat - theta).norm());
      // the last sample closes the window; it is recorded but not integrated
      if (k + 1 < w.size()) {
        states[l] = advance(std::move(states[l]), mixed, normalized, w.dt);
      }
    }
  }

  out.report = build_report(w, run.phi_signal(w.dt), w.t_start,
                            w.time(w.size() - 1) - w.t_start, settings.eta_min);
  // theta_hat(t_s) = 0, so theta_tilde_i(t_s) = -theta_i; use the largest |theta_i|.
  Eigen::Index i = 0;
  theta.cwiseAbs().maxCoeff(&i);
  for (const auto& traj : run.loops) {
    out.final_ratio.push_back((traj.theta_hat.back()(i) - theta(i)) / (-theta(i)));
  }
  return out;
}

SampledSignal synthetic_regressor(RegressorKind kind, double amplitude, double decay_rate,
                                  double dt, double t_end) {
  if (kind != RegressorKind::ExpDecay) throw std::invalid_argument("unknown regressor kind");
  if (!(decay_rate > 0.0)) throw std::invalid_argument("decay rate must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("sample step dt must be positive");
  const auto count = static_cast<std::size_t>(std::llround(t_end / dt)) + 1;
  SampledSignal out{dt, 0.0, std::vector<double>(count)};
  for (std::size_t k = 0; k < count; ++k) {
    out.samples[k] = amplitude * std::exp(-decay_rate * out.time(k));
  }
  return out;
}

ScalarRun run_synthetic(RegressorKind kind, double amplitude, double decay_rate,
                        const ExperimentConfig& cfg) {
  const auto& syn = cfg.synthetic;
  ScalarLoopSettings settings;
  settings.t_s = syn.t_s;
  settings.T = syn.T;
  settings.eta_min = cfg.eta_min;
  settings.theta = Eigen::Map<const Eigen::VectorXd>(cfg.theta_true.data(),
                                                     static_cast<Eigen::Index>(cfg.theta_true.size()));
  settings.loops = default_loops(cfg);
  ScalarRun out = run_scalar_loops(
      synthetic_regressor(kind, amplitude, decay_rate, cfg.dt, syn.t_s + syn.T), settings);
  out.run.u_amp = amplitude;
  return out;
}

ExperimentResult run_synthetic_family(const ExperimentConfig& cfg,
                                      std::vector<ScalarRun>* details) {
  cfg.validate();
  ExperimentResult result;
  result.parameter_count = cfg.theta_true.size();
  result.dt = cfg.dt;
  for (double a : cfg.synthetic.amplitudes) {
    ScalarRun run = run_synthetic(RegressorKind::ExpDecay, a, cfg.synthetic.decay_rate, cfg);
    result.runs.push_back(run.run);
    if (details) details->push_back(std::move(run));
  }
  return result;
}

}  // namespace dremnorm
