#include "dremnorm/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dremnorm {

namespace {

std::string num12(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return buf.data();
}

std::string num4(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.4g", v);
  return buf.data();
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
  const double span = hi - lo;
  const double raw = span / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return ticks;
}

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

constexpr double kWidth = 860.0;
constexpr double kPanelHeight = 320.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kMaxPoints = 1500;

void write_panel(const PlotPanel& panel, double y_offset, std::ostream& out) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  const double x0 = kLeft;
  const double y0 = y_offset + kTop;
  auto sx = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return y0 + (ymax - y) / (ymax - ymin) * plot_h; };

  out << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y_offset + 24
      << "\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(panel.title) << "</text>\n";
  out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (double t : nice_ticks(xmin, xmax, 8)) {
    const double px = sx(t);
    out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + plot_h
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << y0 + plot_h + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num4(t) << "</text>\n";
  }
  for (double t : nice_ticks(ymin, ymax, 6)) {
    const double py = sy(t);
    out << "<line x1=\"" << x0 << "\" y1=\"" << py << "\" x2=\"" << x0 + plot_w << "\" y2=\"" << py
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << x0 - 6 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << num4(t) << "</text>\n";
  }
  out << "<text x=\"" << x0 + plot_w / 2 << "\" y=\"" << y0 + plot_h + 38
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape_xml(panel.x_label) << "</text>\n";
  out << "<text x=\"" << 18 << "\" y=\"" << y0 + plot_h / 2 << "\" text-anchor=\"middle\" "
      << "font-size=\"12\" transform=\"rotate(-90 18 " << y0 + plot_h / 2 << ")\">"
      << escape_xml(panel.y_label) << "</text>\n";

  for (std::size_t s = 0; s < panel.series.size(); ++s) {
    const auto& series = panel.series[s];
    const char* color = kPalette[s % kPalette.size()];
    const std::size_t stride = std::max<std::size_t>(1, series.x.size() / kMaxPoints);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (series.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < series.x.size(); i += stride) {
      if (!std::isfinite(series.y[i])) continue;
      out << num4(sx(series.x[i])) << ',' << num4(sy(series.y[i])) << ' ';
    }
    if (!series.x.empty() && (series.x.size() - 1) % stride != 0 && std::isfinite(series.y.back())) {
      out << num4(sx(series.x.back())) << ',' << num4(sy(series.y.back()));
    }
    out << "\"/>\n";

    const double ly = y0 + 12 + 18.0 * static_cast<double>(s);
    const double lx = x0 + plot_w + 12;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (series.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n<text x=\"" << lx + 28 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">"
        << escape_xml(series.label) << "</text>\n";
  }
}

}  // namespace

std::string csv_header(std::size_t parameter_count) {
  std::string h = "t,u_amp,variant,omega,phi";
  for (std::size_t i = 0; i < parameter_count; ++i) h += ",theta_hat_" + std::to_string(i);
  h += ",err_norm,ub";
  return h;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << csv_header(result.parameter_count) << '\n';
  for (const auto& run : result.runs) {
    for (const auto& loop : run.loops) {
      for (std::size_t k = 0; k < run.t.size(); ++k) {
        out << num12(run.t[k]) << ',' << num12(run.u_amp) << ',' << loop.spec.label << ','
            << num12(run.omega[k]) << ',' << num12(run.phi[k]);
        for (Eigen::Index i = 0; i < loop.theta_hat[k].size(); ++i) {
          out << ',' << num12(loop.theta_hat[k](i));
        }
        out << ',' << num12(loop.err_norm[k]) << ',';
        if (!loop.ub.empty()) out << num12(loop.ub[k]);
        out << '\n';
      }
    }
  }
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(result, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_svg(const std::vector<PlotPanel>& panels, std::ostream& out) {
  const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << kWidth << ' ' << height << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    write_panel(panels[p], kPanelHeight * static_cast<double>(p), out);
  }
  out << "</svg>\n";
}

PlotPanel phi_panel(const ExperimentResult& result) {
  PlotPanel panel{"Normalized regressor phi", "t, s", "phi", {}};
  for (const auto& run : result.runs) {
    panel.series.push_back({"u = " + num4(run.u_amp), run.t, run.phi, false});
  }
  return panel;
}

std::vector<PlotPanel> error_panels(const ExperimentResult& result) {
  std::vector<PlotPanel> panels;
  if (result.runs.empty()) return panels;
  const auto& first = result.runs.front();
  for (std::size_t l = 0; l < first.loops.size(); ++l) {
    const LoopSpec& spec = first.loops[l].spec;
    PlotPanel panel{"Parameter error norm, " + spec.label + " (gamma = " + num4(spec.gamma) + ")",
                    "t, s", "||theta_tilde||", {}};
    for (const auto& run : result.runs) {
      panel.series.push_back({"u = " + num4(run.u_amp), run.t, run.loops[l].err_norm, false});
    }
    if (!first.loops[l].ub.empty()) panel.series.push_back({"UB", first.t, first.loops[l].ub, true});
    panels.push_back(std::move(panel));
  }
  return panels;
}

void emit_plot(const ExperimentResult& result, PlotKind kind, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  if (kind == PlotKind::Phi) {
    write_svg({phi_panel(result)}, out);
  } else {
    write_svg(error_panels(result), out);
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace dremnorm
