// drem: run the excitation-normalized DREM identification experiments.
//
//   drem run       --preset paper_sec5 --out-dir out
//   drem synthetic --preset example2
//   drem bounds    --preset paper_sec5
//   drem sweep     --gamma-sweep 0.05,0.1,0.5,1
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dremnorm/dremnorm.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string out_dir = ".";
  std::vector<double> gamma_sweep;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
  std::string ub_mode;
  bool print_config = false;
};

dremnorm::ExperimentConfig resolve_config(const Options& opt, const std::string& fallback_preset) {
  if (!opt.config_path.empty() && !opt.preset_name.empty()) {
    throw dremnorm::ConfigError("use either --config or --preset, not both");
  }
  dremnorm::ExperimentConfig cfg = !opt.config_path.empty()
                                   ? dremnorm::load_config(opt.config_path)
                                   : dremnorm::preset(opt.preset_name.empty() ? fallback_preset
                                                                          : opt.preset_name);
  if (opt.noise) cfg.noise_amplitude = *opt.noise;
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.ub_mode.empty()) cfg.ub_mode = dremnorm::ub_mode_from_string(opt.ub_mode);
  if (!opt.gamma_sweep.empty()) cfg.gamma_sweep = opt.gamma_sweep;
  cfg.validate();
  return cfg;
}

fs::path prepare_out_dir(const Options& opt) {
  fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void print_report_row(double amp, const dremnorm::ExcitationReport& r) {
  std::printf("%10.4g  %8.3f  %8.3f  %12.6g  %10.6g  %8s  %8s\n", amp, r.t_s, r.T, r.alpha,
              r.phi_energy, r.T_j ? std::to_string(*r.T_j).c_str() : "-",
              r.delta_min ? std::to_string(*r.delta_min).c_str() : "-");
}

void print_report_header() {
  std::printf("%10s  %8s  %8s  %12s  %10s  %8s  %8s\n", "amplitude", "t_s", "T", "alpha",
              "int_phi2", "T_j", "delta");
}

void print_final_errors(const dremnorm::ExperimentResult& result) {
  std::printf("%10s  %-24s  %12s  %14s\n", "u", "loop", "gamma", "final ||err||");
  for (const auto& run : result.runs) {
    for (const auto& loop : run.loops) {
      std::printf("%10.4g  %-24s  %12.6g  %14.6g\n", run.u_amp, loop.spec.label.c_str(),
                  loop.spec.gamma, loop.err_norm.empty() ? 0.0 : loop.err_norm.back());
    }
  }
}

int cmd_run(const Options& opt) {
  const auto cfg = resolve_config(opt, "paper_sec5");
  const auto dir = prepare_out_dir(opt);
  const auto result = dremnorm::run_experiment(cfg);
  dremnorm::emit_csv(result, dir / "run.csv");
  dremnorm::emit_plot(result, dremnorm::PlotKind::Phi, dir / "fig1_phi.svg");
  dremnorm::emit_plot(result, dremnorm::PlotKind::Errors, dir / "fig2_error.svg");
  print_final_errors(result);
  for (const auto& run : result.runs) {
    for (const auto& w : run.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    double worst = 0.0;
    for (std::size_t k = 0; k < run.t.size(); ++k) {
      if (run.t[k] >= run.t0 + 1.0) worst = std::max(worst, run.residual[k]);
    }
    std::printf("u=%g: t0=%g, max regression residual after t0+1s = %.3g\n", run.u_amp, run.t0,
                worst);
  }
  std::printf("wrote %s\n", (dir / "run.csv").string().c_str());
  return 0;
}

int cmd_synthetic(const Options& opt) {
  const auto cfg = resolve_config(opt, "example2");
  const auto dir = prepare_out_dir(opt);
  std::vector<dremnorm::ScalarRun> details;
  const auto result = dremnorm::run_synthetic_family(cfg, &details);
  dremnorm::emit_csv(result, dir / "synthetic.csv");
  dremnorm::emit_plot(result, dremnorm::PlotKind::Phi, dir / "synthetic_phi.svg");
  dremnorm::emit_plot(result, dremnorm::PlotKind::Errors, dir / "synthetic_error.svg");
  print_report_header();
  for (const auto& d : details) print_report_row(d.run.u_amp, d.report);
  std::printf("\n%10s  %-18s  %12s  %14s\n", "A", "loop", "gamma", "ratio");
  for (const auto& d : details) {
    for (std::size_t l = 0; l < d.final_ratio.size(); ++l) {
      std::printf("%10.4g  %-18s  %12.6g  %14.6g\n", d.run.u_amp,
                  d.run.loops[l].spec.label.c_str(), d.run.loops[l].spec.gamma, d.final_ratio[l]);
    }
  }
  std::printf("wrote %s\n", (dir / "synthetic.csv").string().c_str());
  return 0;
}

int cmd_bounds(const Options& opt) {
  const auto cfg = resolve_config(opt, "paper_sec5");
  std::vector<dremnorm::ExcitationReport> reports;
  std::vector<double> amps;
  if (cfg.name == "example1" || cfg.name == "example2") {
    std::vector<dremnorm::ScalarRun> details;
    dremnorm::run_synthetic_family(cfg, &details);
    for (const auto& d : details) {
      reports.push_back(d.report);
      amps.push_back(d.run.u_amp);
    }
  } else {
    const auto result = dremnorm::run_experiment(cfg);
    for (const auto& run : result.runs) {
      if (!run.report) {
        throw dremnorm::ConfigError("horizon too short for the bound window");
      }
      reports.push_back(*run.report);
      amps.push_back(run.u_amp);
    }
  }
  print_report_header();
  for (std::size_t i = 0; i < reports.size(); ++i) print_report_row(amps[i], reports[i]);
  if (auto d = dremnorm::common_delta_min(reports)) {
    std::printf("common delta_min = %.6g (any delta in (0, %.6g] is admissible)\n", *d, *d);
  } else {
    std::printf("no common delta_min: some regressor never exceeds 10^eta_min\n");
  }
  return 0;
}

int cmd_sweep(const Options& opt) {
  const auto cfg = resolve_config(opt, "paper_sec5");
  const auto dir = prepare_out_dir(opt);
  const auto result = dremnorm::run_sweep(cfg, cfg.gamma_sweep);
  dremnorm::emit_csv(result, dir / "sweep.csv");
  dremnorm::emit_plot(result, dremnorm::PlotKind::Errors, dir / "fig3_sweep.svg");
  print_final_errors(result);
  std::printf("wrote %s\n", (dir / "sweep.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excitation-normalized DREM parameter identification"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config_path, "Experiment config file (INI)");
  app.add_option("--preset", opt.preset_name, "Built-in preset: paper_sec5, example1, example2");
  app.add_option("--out-dir", opt.out_dir, "Directory for CSV and SVG output");
  app.add_option("--gamma-sweep", opt.gamma_sweep, "Comma-separated gains for `sweep`")
      ->delimiter(',');
  app.add_option("--noise", opt.noise, "Uniform measurement noise amplitude on y");
  app.add_option("--seed", opt.seed, "Noise seed");
  app.add_option("--ub-mode", opt.ub_mode, "Upper-bound curve: stepwise or continuous")
      ->check(CLI::IsMember({"stepwise", "continuous"}));
  app.add_flag("--print-config", opt.print_config, "Print the resolved config and exit");

  auto* run = app.add_subcommand("run", "Full plant pipeline, all three loops");
  auto* synthetic = app.add_subcommand("synthetic", "Exponentially decaying synthetic regressors");
  auto* bounds = app.add_subcommand("bounds", "Excitation report only");
  auto* sweep = app.add_subcommand("sweep", "Excitation-normalized loop over several gains");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (opt.print_config) {
      const std::string fallback = synthetic->parsed() ? "example2" : "paper_sec5";
      std::cout << dremnorm::serialize_config(resolve_config(opt, fallback));
      return 0;
    }
    if (run->parsed()) return cmd_run(opt);
    if (synthetic->parsed()) return cmd_synthetic(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
  } catch (const dremnorm::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
