#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dremnorm/estimators.hpp"
#include "dremnorm/excitation_analysis.hpp"
#include "dremnorm/lti_sim.hpp"

namespace dremnorm {

struct LoopGains {
  double plain = 1e4;
  double norm_excitation = 0.1;
  double norm_classical = 1e4;

  double operator[](LoopVariant variant) const;
  bool operator==(const LoopGains&) const = default;
};

/// Exponentially decaying scalar regressors A e^{-rate t} fed straight to the
/// normalizer and estimators, bypassing plant and mixing.
struct SyntheticSettings {
  std::vector<double> amplitudes{1.0, 10.0};
  double decay_rate = 1.0;
  double t_s = 0.0;
  double T = 10.0;

  bool operator==(const SyntheticSettings&) const = default;
};

/// Everything a run needs. Defaults reproduce the published plant
/// experiment (preset "paper_sec5").
struct ExperimentConfig {
  std::string name = "paper_sec5";
  TransferFunction plant{{2.0, 1.0}, {1.0, 2.0}};
  std::vector<double> psi{20.0, 100.0};
  std::vector<double> delays{0.2, 0.4, 0.6};
  double eta_min = -12.0;
  std::vector<double> input_amplitudes{1.0, 10.0, 100.0};
  LoopGains gains;
  double dt = 0.01;
  double horizon = 20.0;
  double noise_amplitude = 0.0;
  std::uint64_t seed = 1;
  std::vector<double> theta_true{2.0, 1.0, 1.0, 2.0};
  double delta_for_ub = 0.7;
  double ub_t_s = 0.0;
  double ub_window = 10.0;
  UbMode ub_mode = UbMode::Stepwise;
  SyntheticSettings synthetic;
  std::vector<double> gamma_sweep{0.05, 0.1, 0.5, 1.0};

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const ExperimentConfig& other) const;
};

/// "paper_sec5", "example1" or "example2"; throws ConfigError otherwise.
ExperimentConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// INI text with sections [experiment] [plant] [filter] [drem] [normalizer]
/// [simulation] [gains] [bound] [synthetic] [sweep]. Lists are comma
/// separated. Missing keys keep the paper_sec5 defaults; unknown keys are
/// rejected. The result is validated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Shortest round-trip number formatting, so parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace dremnorm
