#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dremnorm/dremnorm.hpp"

namespace py = pybind11;
using namespace dremnorm;

namespace {

SampledSignal as_signal(std::vector<double> samples, double dt, double t_start) {
  SampledSignal s{dt, t_start, std::move(samples)};
  s.validate();
  return s;
}

BoundRegime regime_from_string(const std::string& name) {
  for (auto r : {BoundRegime::Plain, BoundRegime::NeLow, BoundRegime::NeHigh,
                 BoundRegime::NeMixed, BoundRegime::Classical}) {
    if (name == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown regime '" + name + "'");
}

py::dict report_to_dict(const ExcitationReport& r) {
  py::dict d;
  d["t_s"] = r.t_s;
  d["T"] = r.T;
  d["alpha"] = r.alpha;
  d["phi_energy"] = r.phi_energy;
  d["classical_energy"] = r.classical_energy;
  d["eta_min"] = r.eta_min;
  d["T_j"] = r.T_j;
  d["delta_min"] = r.delta_min;
  return d;
}

py::dict run_to_dict(const AmplitudeRun& run) {
  py::dict d;
  d["u_amp"] = run.u_amp;
  d["t0"] = run.t0;
  d["t"] = run.t;
  d["omega"] = run.omega;
  d["phi"] = run.phi;
  d["residual"] = run.residual;
  py::dict loops;
  for (const auto& loop : run.loops) {
    py::dict l;
    l["variant"] = std::string(to_string(loop.spec.variant));
    l["gamma"] = loop.spec.gamma;
    l["err_norm"] = loop.err_norm;
    l["ub"] = loop.ub;
    l["theta_hat_final"] =
        loop.theta_hat.empty() ? Eigen::VectorXd() : loop.theta_hat.back();
    loops[py::str(loop.spec.label)] = l;
  }
  d["loops"] = loops;
  d["retrieved"] = run.retrieved;
  d["retrieved_at"] = run.retrieved_at;
  d["report"] = run.report ? py::object(report_to_dict(*run.report)) : py::none();
  return d;
}

ExperimentConfig resolve(const std::optional<std::string>& preset_name,
                         const std::optional<std::string>& config_text) {
  if (preset_name && config_text) throw ConfigError("pass either preset or config_text");
  if (config_text) {
    std::istringstream in(*config_text);
    return parse_config(in);
  }
  return preset(preset_name.value_or("paper_sec5"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Excitation-normalized DREM parameter identification";

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<TransferFunction>(m, "TransferFunction")
      .def(py::init([](std::vector<double> num, std::vector<double> den) {
             TransferFunction tf{std::move(num), std::move(den)};
             tf.validate();
             return tf;
           }),
           py::arg("num"), py::arg("den"))
      .def_readonly("num", &TransferFunction::num)
      .def_readonly("den", &TransferFunction::den)
      .def_property_readonly("order", &TransferFunction::order)
      .def("parameters", &TransferFunction::parameters);

  m.def(
      "realize_state_space",
      [](const TransferFunction& tf) {
        const StateSpace ss = realize_state_space(tf);
        return py::make_tuple(ss.A, ss.b, Eigen::VectorXd(ss.c.transpose()));
      },
      py::arg("tf"));

  m.def(
      "simulate",
      [](const TransferFunction& tf, std::vector<double> u, double dt,
         std::optional<Eigen::VectorXd> x0) {
        const SampledSignal in = as_signal(std::move(u), dt, 0.0);
        return (x0 ? simulate(tf, in, *x0) : simulate(tf, in)).samples;
      },
      py::arg("tf"), py::arg("u"), py::arg("dt"), py::arg("x0") = py::none());

  m.def(
      "make_step_input",
      [](double amplitude, double dt, double duration) {
        return make_step_input(amplitude, dt, duration).samples;
      },
      py::arg("amplitude"), py::arg("dt"), py::arg("duration"));

  m.def(
      "add_noise",
      [](std::vector<double> y, double dt, double amplitude, std::uint64_t seed) {
        return add_noise(as_signal(std::move(y), dt, 0.0), amplitude, seed).samples;
      },
      py::arg("y"), py::arg("dt"), py::arg("noise_amplitude"), py::arg("seed"));

  m.def(
      "numeric_order",
      [](double omega) {
        const NumericOrder o = numeric_order(omega);
        const double eta = o.eta.is_neg_inf() ? -std::numeric_limits<double>::infinity()
                                              : o.eta.value();
        return py::make_tuple(o.sign, eta);
      },
      py::arg("omega"), "Returns (sign, eta); eta is -inf for omega == 0.");

  m.def(
      "saturate",
      [](double eta, double eta_min) {
        const Eta e = std::isinf(eta) && eta < 0 ? Eta::neg_inf() : Eta::finite(eta);
        return saturate(e, eta_min);
      },
      py::arg("eta"), py::arg("eta_min"));

  m.def(
      "normalize",
      [](double omega, const Eigen::VectorXd& z, double eta_min) {
        const NormalizedRegression r =
            normalize(MixedRegression{0.0, omega, z, true}, NormalizerConfig{eta_min});
        return py::make_tuple(r.phi, r.Y);
      },
      py::arg("omega"), py::arg("z"), py::arg("eta_min"), "Returns (phi, Y).");

  m.def(
      "adjugate_det",
      [](const Eigen::MatrixXd& M) {
        const AdjugateDet ad = adjugate_det(M);
        return py::make_tuple(ad.adjugate, ad.determinant);
      },
      py::arg("M"), "Returns (adj(M), det(M)).");

  m.def(
      "excitation_level",
      [](std::vector<double> samples, double dt, double t_s, double T, double t_start) {
        return excitation_level(as_signal(std::move(samples), dt, t_start), t_s, T);
      },
      py::arg("samples"), py::arg("dt"), py::arg("t_s"), py::arg("T"), py::arg("t_start") = 0.0);

  m.def(
      "phi_excitation",
      [](std::vector<double> samples, double dt, double t_s, double T, double t_start) {
        return phi_excitation(as_signal(std::move(samples), dt, t_start), t_s, T);
      },
      py::arg("phi"), py::arg("dt"), py::arg("t_s"), py::arg("T"), py::arg("t_start") = 0.0);

  m.def(
      "order_change_times",
      [](std::vector<double> samples, double dt, double eta_min, double t_start) {
        const OrderChanges c =
            order_change_times(as_signal(std::move(samples), dt, t_start), eta_min);
        std::vector<std::pair<double, int>> crossings;
        for (const auto& x : c.crossings) crossings.emplace_back(x.t, x.order);
        return py::make_tuple(c.T_j, crossings);
      },
      py::arg("samples"), py::arg("dt"), py::arg("eta_min"), py::arg("t_start") = 0.0,
      "Returns (T_j or None, [(t, order), ...]).");

  m.def(
      "error_bounds",
      [](const std::string& regime, double gamma, double theta_err_start, double T, double alpha,
         double phi_energy, double classical_energy, std::optional<double> eta_min,
         std::optional<double> delta_min) {
        ExcitationReport r;
        r.T = T;
        r.alpha = alpha;
        r.phi_energy = phi_energy;
        r.classical_energy = classical_energy;
        r.eta_min = eta_min;
        r.delta_min = delta_min;
        const ErrorBounds b = error_bounds(r, gamma, theta_err_start, regime_from_string(regime));
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("regime"), py::arg("gamma"), py::arg("theta_err_start"), py::arg("T"),
      py::arg("alpha") = 0.0, py::arg("phi_energy") = 0.0, py::arg("classical_energy") = 0.0,
      py::arg("eta_min") = py::none(), py::arg("delta_min") = py::none(),
      "regime: plain, ne_low, ne_high, ne_mixed or classical. Returns (lower, upper).");

  m.def(
      "ub_curve",
      [](double gamma, double delta, double T, double t_s, double theta_err_start, double horizon,
         const std::string& mode, double dt) {
        return ub_curve(gamma, delta, T, t_s, theta_err_start, horizon, ub_mode_from_string(mode),
                        dt)
            .samples;
      },
      py::arg("gamma"), py::arg("delta"), py::arg("T"), py::arg("t_s"),
      py::arg("theta_err_start"), py::arg("horizon"), py::arg("mode") = "stepwise",
      py::arg("dt") = 0.01);

  m.def("preset_names", &preset_names);
  m.def(
      "preset_config", [](const std::string& name) { return serialize_config(preset(name)); },
      py::arg("name"), "INI text of a built-in preset.");

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("parameter_count", &ExperimentResult::parameter_count)
      .def_property_readonly("runs",
                             [](const ExperimentResult& r) {
                               py::list out;
                               for (const auto& run : r.runs) out.append(run_to_dict(run));
                               return out;
                             })
      .def("to_csv",
           [](const ExperimentResult& r) {
             std::ostringstream out;
             write_csv(r, out);
             return out.str();
           })
      .def(
          "write_csv",
          [](const ExperimentResult& r, const std::string& path) { emit_csv(r, path); },
          py::arg("path"));

  m.def(
      "run_experiment",
      [](std::optional<std::string> preset_name, std::optional<std::string> config_text,
         std::optional<double> noise, std::optional<std::uint64_t> seed) {
        ExperimentConfig cfg = resolve(preset_name, config_text);
        if (noise) cfg.noise_amplitude = *noise;
        if (seed) cfg.seed = *seed;
        py::gil_scoped_release release;
        return run_experiment(cfg);
      },
      py::arg("preset") = py::none(), py::arg("config_text") = py::none(),
      py::arg("noise") = py::none(), py::arg("seed") = py::none());

  m.def(
      "run_sweep",
      [](std::vector<double> gammas, std::optional<std::string> preset_name,
         std::optional<std::string> config_text) {
        const ExperimentConfig cfg = resolve(preset_name, config_text);
        py::gil_scoped_release release;
        return run_sweep(cfg, gammas);
      },
      py::arg("gammas"), py::arg("preset") = py::none(), py::arg("config_text") = py::none());

  m.def(
      "run_synthetic",
      [](double amplitude, double decay_rate, std::optional<std::string> preset_name,
         std::optional<std::string> config_text) {
        const ExperimentConfig cfg = (preset_name || config_text)
                                         ? resolve(preset_name, config_text)
                                         : preset("example2");
        const ScalarRun run = run_synthetic(RegressorKind::ExpDecay, amplitude, decay_rate, cfg);
        py::dict d = run_to_dict(run.run);
        d["report"] = report_to_dict(run.report);
        py::dict ratios;
        for (std::size_t l = 0; l < run.final_ratio.size(); ++l) {
          ratios[py::str(run.run.loops[l].spec.label)] = run.final_ratio[l];
        }
        d["final_ratio"] = ratios;
        return d;
      },
      py::arg("amplitude"), py::arg("decay_rate") = 1.0, py::arg("preset") = py::none(),
      py::arg("config_text") = py::none());
}
