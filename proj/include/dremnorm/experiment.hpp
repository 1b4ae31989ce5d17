#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dremnorm/config.hpp"
#include "dremnorm/estimators.hpp"
#include "dremnorm/excitation_analysis.hpp"
#include "dremnorm/lti_sim.hpp"

namespace dremnorm {

struct LoopSpec {
  LoopVariant variant = LoopVariant::Plain;
  double gamma = 1.0;
  /// CSV variant column; defaults to the variant name.
  std::string label;
};

struct LoopTrajectory {
  LoopSpec spec;
  /// Estimate at each recorded sample, before that sample's update.
  std::vector<Eigen::VectorXd> theta_hat;
  std::vector<double> err_norm;
  /// Upper-bound curve; empty for loops without one.
  std::vector<double> ub;
};

/// One input amplitude (or one synthetic regressor) pushed through all loops.
struct AmplitudeRun {
  double u_amp = 0.0;
  double t0 = 0.0;
  std::vector<double> t;
  std::vector<double> omega;
  std::vector<double> phi;
  std::vector<char> valid;
  /// max_i |z_i - omega theta_i| / (1 + |omega|) per sample; zero before t_0.
  std::vector<double> residual;
  std::vector<LoopTrajectory> loops;
  std::optional<Eigen::VectorXd> retrieved;
  std::optional<double> retrieved_at;
  std::optional<ExcitationReport> report;
  std::vector<std::string> warnings;

  SampledSignal omega_signal(double dt) const;
  SampledSignal phi_signal(double dt) const;
};

struct ExperimentResult {
  std::size_t parameter_count = 0;
  double dt = 0.01;
  std::vector<AmplitudeRun> runs;

  bool empty() const;
};

/// Loops used by `run`: plain, norm_excitation, norm_classical with cfg gains.
std::vector<LoopSpec> default_loops(const ExperimentConfig& cfg);

/// Plant -> filters -> delays -> mixing -> normalization -> loops for one
/// input amplitude. Errors are rethrown with the failing stage named.
AmplitudeRun run_amplitude(const ExperimentConfig& cfg, double u_amp, std::size_t index,
                           std::span<const LoopSpec> loops);

/// All input amplitudes with the three default loops. Deterministic for a
/// given config (noise streams are seeded from cfg.seed and the amplitude
/// index).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Excitation-normalized loop only, once per gain in `gammas`.
ExperimentResult run_sweep(const ExperimentConfig& cfg, std::span<const double> gammas);

enum class RegressorKind { ExpDecay };

struct ScalarLoopSettings {
  double t_s = 0.0;
  double T = 10.0;
  double eta_min = -2.0;
  Eigen::VectorXd theta;
  std::vector<LoopSpec> loops;
};

struct ScalarRun {
  ExcitationReport report;
  AmplitudeRun run;
  /// theta_tilde_i(t_s + T) / theta_tilde_i(t_s) per loop (same for every i).
  std::vector<double> final_ratio;
};

/// Feeds a given scalar regressor omega (with z = omega theta) through the
/// normalizer and loops on [t_s, t_s + T]. Loops start at t_s.
ScalarRun run_scalar_loops(const SampledSignal& omega, const ScalarLoopSettings& settings);

/// A e^{-rate t} sampled at cfg.dt on [0, t_s + T] (endpoint included).
SampledSignal synthetic_regressor(RegressorKind kind, double amplitude, double decay_rate,
                                  double dt, double t_end);

/// Synthetic regressor with the config's eta_min, gains, theta and window.
ScalarRun run_synthetic(RegressorKind kind, double amplitude, double decay_rate,
                        const ExperimentConfig& cfg);

/// Synthetic runs for every cfg.synthetic amplitude, packed for CSV output.
ExperimentResult run_synthetic_family(const ExperimentConfig& cfg,
                                      std::vector<ScalarRun>* details = nullptr);

}  // namespace dremnorm
