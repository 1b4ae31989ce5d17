#include "dremnorm/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dremnorm/drem_mixing.hpp"
#include "dremnorm/errors.hpp"
#include "dremnorm/svf_regression.hpp"

namespace dremnorm {

namespace pt = boost::property_tree;

namespace {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw ConfigError("cannot format number");
  return std::string(buf.data(), end);
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("config key '" + key + "': '" + t + "' is not a number");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(key, std::string_view(text).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool near_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_positive_list(const std::vector<double>& values, const std::string& field) {
  require(!values.empty(), field + " must not be empty");
  for (double v : values) require(std::isfinite(v) && v > 0.0, field + " entries must be > 0");
}

// Field table shared by parse and serialize; keeps the two in lockstep.
struct Field {
  const char* section;
  const char* key;
  std::string (*get)(const ExperimentConfig&);
  void (*set)(ExperimentConfig&, const std::string& path, const std::string& value);
};

#define DREM_NUMBER_FIELD(sec, k, member)                                                   \
  Field {                                                                                   \
    sec, k, [](const ExperimentConfig& c) { return format_number(c.member); },              \
        [](ExperimentConfig& c, const std::string& p, const std::string& v) {               \
          c.member = parse_number(p, v);                                                    \
        }                                                                                   \
  }
#define DREM_LIST_FIELD(sec, k, member)                                                     \
  Field {                                                                                   \
    sec, k, [](const ExperimentConfig& c) { return format_list(c.member); },                \
        [](ExperimentConfig& c, const std::string& p, const std::string& v) {               \
          c.member = parse_list(p, v);                                                      \
        }                                                                                   \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      Field{"experiment", "name", [](const ExperimentConfig& c) { return c.name; },
            [](ExperimentConfig& c, const std::string&, const std::string& v) { c.name = trim(v); }},
      DREM_LIST_FIELD("plant", "num", plant.num),
      DREM_LIST_FIELD("plant", "den", plant.den),
      DREM_LIST_FIELD("filter", "psi", psi),
      DREM_LIST_FIELD("drem", "delays", delays),
      DREM_NUMBER_FIELD("normalizer", "eta_min", eta_min),
      DREM_NUMBER_FIELD("simulation", "dt", dt),
      DREM_NUMBER_FIELD("simulation", "horizon", horizon),
      DREM_LIST_FIELD("simulation", "input_amplitudes", input_amplitudes),
      DREM_NUMBER_FIELD("simulation", "noise_amplitude", noise_amplitude),
      Field{"simulation", "seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
            [](ExperimentConfig& c, const std::string& p, const std::string& v) {
              const std::string t = trim(v);
              std::uint64_t seed = 0;
              auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
              if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
                throw ConfigError("config key '" + p + "': '" + t + "' is not an unsigned integer");
              }
              c.seed = seed;
            }},
      DREM_LIST_FIELD("simulation", "theta_true", theta_true),
      DREM_NUMBER_FIELD("gains", "plain", gains.plain),
      DREM_NUMBER_FIELD("gains", "norm_excitation", gains.norm_excitation),
      DREM_NUMBER_FIELD("gains", "norm_classical", gains.norm_classical),
      DREM_NUMBER_FIELD("bound", "delta", delta_for_ub),
      DREM_NUMBER_FIELD("bound", "t_s", ub_t_s),
      DREM_NUMBER_FIELD("bound", "window", ub_window),
      Field{"bound", "mode",
            [](const ExperimentConfig& c) { return std::string(to_string(c.ub_mode)); },
            [](ExperimentConfig& c, const std::string& p, const std::string& v) {
              try {
                c.ub_mode = ub_mode_from_string(trim(v));
              } catch (const std::invalid_argument& e) {
                throw ConfigError("config key '" + p + "': " + e.what());
              }
            }},
      DREM_LIST_FIELD("synthetic", "amplitudes", synthetic.amplitudes),
      DREM_NUMBER_FIELD("synthetic", "decay_rate", synthetic.decay_rate),
      DREM_NUMBER_FIELD("synthetic", "t_s", synthetic.t_s),
      DREM_NUMBER_FIELD("synthetic", "window", synthetic.T),
      DREM_LIST_FIELD("sweep", "gammas", gamma_sweep),
  };
  return table;
}

#undef DREM_NUMBER_FIELD
#undef DREM_LIST_FIELD

}  // namespace

double LoopGains::operator[](LoopVariant variant) const {
  switch (variant) {
    case LoopVariant::Plain:
      return plain;
    case LoopVariant::NormExcitation:
      return norm_excitation;
    case LoopVariant::NormClassical:
      return norm_classical;
  }
  return plain;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return name == o.name && plant.num == o.plant.num && plant.den == o.plant.den &&
         psi == o.psi && delays == o.delays && eta_min == o.eta_min &&
         input_amplitudes == o.input_amplitudes && gains == o.gains && dt == o.dt &&
         horizon == o.horizon && noise_amplitude == o.noise_amplitude && seed == o.seed &&
         theta_true == o.theta_true && delta_for_ub == o.delta_for_ub && ub_t_s == o.ub_t_s &&
         ub_window == o.ub_window && ub_mode == o.ub_mode && synthetic == o.synthetic &&
         gamma_sweep == o.gamma_sweep;
}

void ExperimentConfig::validate() const {
  try {
    plant.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("plant: ") + e.what());
  }
  try {
    FilterSpec spec(psi);
    require(spec.order() == plant.order(), "filter.psi must have the plant order n entries");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("filter: ") + e.what());
  }
  const std::size_t params = plant.num.size() + plant.den.size();
  require(delays.size() + 1 == params, "drem.delays must have m+n = " +
                                           std::to_string(params - 1) + " entries");
  require_positive_list(delays, "drem.delays");
  require(std::isfinite(eta_min), "normalizer.eta_min must be finite");
  require(std::isfinite(dt) && dt > 0.0, "simulation.dt must be > 0");
  try {
    DelayBank(delays, dt, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("drem: ") + e.what());
  }
  require(std::isfinite(horizon) && horizon >= 0.0, "simulation.horizon must be >= 0");
  require(!input_amplitudes.empty(), "simulation.input_amplitudes must not be empty");
  for (double u : input_amplitudes) {
    require(std::isfinite(u), "simulation.input_amplitudes must be finite");
  }
  require(std::isfinite(noise_amplitude) && noise_amplitude >= 0.0,
          "simulation.noise_amplitude must be >= 0");
  require(theta_true.size() == params, "simulation.theta_true must have m+n+1 entries");
  const Eigen::VectorXd theta = plant.parameters();
  for (std::size_t i = 0; i < params; ++i) {
    require(near_equal(theta_true[i], theta(static_cast<Eigen::Index>(i))),
            "simulation.theta_true must equal [plant.num, plant.den]");
  }
  for (double g : {gains.plain, gains.norm_excitation, gains.norm_classical}) {
    require(std::isfinite(g) && g > 0.0, "gains must be > 0");
  }
  require(std::isfinite(ub_window) && ub_window > 0.0, "bound.window must be > 0");
  require(std::isfinite(delta_for_ub) && delta_for_ub > 0.0 && delta_for_ub <= ub_window,
          "bound.delta must lie in (0, bound.window]");
  require(std::isfinite(ub_t_s) && ub_t_s >= 0.0, "bound.t_s must be >= 0");
  require_positive_list(synthetic.amplitudes, "synthetic.amplitudes");
  require(std::isfinite(synthetic.decay_rate) && synthetic.decay_rate > 0.0,
          "synthetic.decay_rate must be > 0");
  require(std::isfinite(synthetic.t_s) && synthetic.t_s >= 0.0, "synthetic.t_s must be >= 0");
  require(std::isfinite(synthetic.T) && synthetic.T > 0.0, "synthetic.window must be > 0");
  require_positive_list(gamma_sweep, "sweep.gammas");
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig cfg;
  if (name == "paper_sec5") return cfg;
  if (name == "example1" || name == "example2") {
    cfg.name = std::string(name);
    cfg.dt = 1e-3;
    cfg.horizon = 10.0;
    cfg.eta_min = -2.0;
    cfg.gains = LoopGains{1.0, 1.0, 1.0};
    cfg.synthetic.amplitudes =
        name == "example1" ? std::vector<double>{1.0, 2.0} : std::vector<double>{1.0, 10.0};
    return cfg;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"paper_sec5", "example1", "example2"}; }

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  std::map<std::string, std::set<std::string>> known;
  for (const auto& f : fields()) known[f.section].insert(f.key);

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config key '" + section + "' must live inside a [section]");
    }
    auto it = known.find(section);
    if (it == known.end()) throw ConfigError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) {
        throw ConfigError("unknown config key '" + section + "." + key + "'");
      }
    }
  }

  ExperimentConfig cfg;
  for (const auto& f : fields()) {
    const std::string path = std::string(f.section) + "." + f.key;
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) {
      f.set(cfg, path, *v);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

}  // namespace dremnorm
