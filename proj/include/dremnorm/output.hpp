#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dremnorm/experiment.hpp"

namespace dremnorm {

/// Header: t,u_amp,variant,omega,phi,theta_hat_0..theta_hat_k,err_norm,ub.
std::string csv_header(std::size_t parameter_count);

/// One row per sample per loop, numbers with 12 significant digits. The ub
/// field is empty for loops without an upper-bound curve.
void write_csv(const ExperimentResult& result, std::ostream& out);

/// Throws std::runtime_error if the file cannot be written.
void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotPanel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG with the panels stacked vertically.
void write_svg(const std::vector<PlotPanel>& panels, std::ostream& out);

/// phi(t) per input amplitude.
PlotPanel phi_panel(const ExperimentResult& result);
/// ||theta_tilde||(t) per amplitude, one panel per loop, UB dashed when present.
std::vector<PlotPanel> error_panels(const ExperimentResult& result);

/// Writes the plot set for `result`: phi and error panels for `run` or
/// `synthetic`, one error panel per gain for `sweep`.
enum class PlotKind { Phi, Errors };
void emit_plot(const ExperimentResult& result, PlotKind kind, const std::filesystem::path& path);

}  // namespace dremnorm
