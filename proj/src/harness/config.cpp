#include "epsim/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "epsim/bell.hpp"
#include "epsim/channels.hpp"

namespace epsim::harness {
namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

const json& object_at(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing");
  const json& v = obj.at(key);
  if (!v.is_object()) throw ConfigError(join(path, key), "must be an object");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& path, std::optional<double> fallback) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "missing");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "must be a number");
  return v.get<double>();
}

double probability(const json& obj, const std::string& key, const std::string& path, std::optional<double> fallback) {
  const double v = number(obj, key, path, fallback);
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(join(path, key), "must lie in [0,1]");
  return v;
}

bool boolean(const json& obj, const std::string& key, const std::string& path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "must be true or false");
  return v.get<bool>();
}

std::string text(const json& obj, const std::string& key, const std::string& path,
                 std::optional<std::string> fallback) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(join(path, key), "missing");
  }
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "must be a string");
  return v.get<std::string>();
}

template <typename F>
auto parse_enum(const std::string& value, const std::string& field, F convert) {
  try {
    return convert(value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "trajectory") return ExperimentKind::trajectory;
  if (s == "yield") return ExperimentKind::yield;
  if (s == "regime") return ExperimentKind::regime;
  throw std::invalid_argument("unknown kind '" + s + "' (expected trajectory|yield|regime)");
}

InitialFamily family_from_string(const std::string& s) {
  if (s == "werner") return InitialFamily::werner;
  if (s == "dephasing") return InitialFamily::dephasing;
  if (s == "damping") return InitialFamily::damping;
  if (s == "bell_diagonal") return InitialFamily::bell_diagonal;
  throw std::invalid_argument("unknown initial family '" + s + "' (expected werner|dephasing|damping|bell_diagonal)");
}

SweepParameter sweep_from_string(const std::string& s) {
  if (s == "none") return SweepParameter::none;
  if (s == "q") return SweepParameter::q;
  if (s == "f0") return SweepParameter::f0;
  if (s == "q_cswap") return SweepParameter::q_cswap;
  throw std::invalid_argument("unknown sweep parameter '" + s + "' (expected none|q|f0|q_cswap)");
}

InitialState parse_initial(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"family", "f0", "gamma_damp", "two_sided", "coefficients"});
  InitialState s;
  s.family = parse_enum(text(obj, "family", path, std::nullopt), join(path, "family"), family_from_string);
  s.f0 = probability(obj, "f0", path, 0.9);
  s.gamma_damp = probability(obj, "gamma_damp", path, 0.0);
  s.two_sided = boolean(obj, "two_sided", path, true);
  if (obj.contains("coefficients")) {
    const json& c = obj.at("coefficients");
    const std::string field = join(path, "coefficients");
    if (!c.is_array() || c.size() != 4) throw ConfigError(field, "must be an array of four numbers");
    for (int k = 0; k < 4; ++k) {
      if (!c[k].is_number()) throw ConfigError(field, "must be an array of four numbers");
      s.coefficients[k] = c[k].get<double>();
    }
    try {
      BellDiagonalState check(s.coefficients);
    } catch (const std::domain_error& e) {
      throw ConfigError(field, e.what());
    }
  }
  return s;
}

NoiseModel parse_noise(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"family", "q_cnot", "q_cswap", "p_meas"});
  NoiseModel m;
  m.family = parse_enum(text(obj, "family", path, "none"), join(path, "family"), noise_family_from_string);
  m.q_cnot = probability(obj, "q_cnot", path, 1.0);
  m.q_cswap = probability(obj, "q_cswap", path, 1.0);
  m.p_meas = probability(obj, "p_meas", path, 1.0);
  return m;
}

SeriesSpec parse_series(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "must be an object");
  reject_unknown(obj, path,
                 {"label", "protocol", "oxford", "subroutine", "control_dim", "second_cswap", "kept", "control",
                  "twirl_initial", "q_cswap", "initial"});
  SeriesSpec s;
  s.variant.base = parse_enum(text(obj, "protocol", path, std::nullopt), join(path, "protocol"),
                              protocol_kind_from_string);
  s.label = text(obj, "label", path, to_string(s.variant.base));
  s.variant.oxford = boolean(obj, "oxford", path, false);
  s.variant.subroutine =
      parse_enum(text(obj, "subroutine", path, "P2"), join(path, "subroutine"), subroutine_from_string);
  const int default_dim = s.variant.base == ProtocolKind::superposed_double ? 3 : 2;
  const double dim = number(obj, "control_dim", path, default_dim);
  if (dim != static_cast<int>(dim)) throw ConfigError(join(path, "control_dim"), "must be an integer");
  s.variant.control_dim = static_cast<int>(dim);
  s.variant.second_cswap = boolean(obj, "second_cswap", path, false);
  s.variant.kept = parse_enum(text(obj, "kept", path, "automatic"), join(path, "kept"), kept_set_from_string);
  s.control = parse_enum(text(obj, "control", path, "identical"), join(path, "control"), control_source_from_string);
  s.twirl_initial = boolean(obj, "twirl_initial", path, false);
  if (obj.contains("q_cswap") && !obj.at("q_cswap").is_null()) s.q_cswap = probability(obj, "q_cswap", path, {});
  if (obj.contains("initial") && !obj.at("initial").is_null()) {
    s.initial = parse_initial(object_at(obj, "initial", path), join(path, "initial"));
  }
  try {
    s.variant.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  return s;
}

ExperimentConfig parse_experiment(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "experiment must be an object");
  reject_unknown(obj, path,
                 {"name", "description", "kind", "initial", "noise", "rounds", "twirl_per_round",
                  "inter_round_hadamard", "f_target", "series", "sweep"});
  ExperimentConfig c;
  c.name = text(obj, "name", path, std::nullopt);
  c.description = text(obj, "description", path, "");
  c.kind = parse_enum(text(obj, "kind", path, "trajectory"), join(path, "kind"), kind_from_string);
  c.initial = parse_initial(object_at(obj, "initial", path), join(path, "initial"));
  c.noise = obj.contains("noise") ? parse_noise(object_at(obj, "noise", path), join(path, "noise")) : NoiseModel{};
  const double rounds = number(obj, "rounds", path, 5);
  if (rounds != static_cast<int>(rounds)) throw ConfigError(join(path, "rounds"), "must be an integer");
  c.rounds = static_cast<int>(rounds);
  c.twirl_per_round = boolean(obj, "twirl_per_round", path, false);
  c.inter_round_hadamard = boolean(obj, "inter_round_hadamard", path, false);
  c.f_target = probability(obj, "f_target", path, 0.95);
  if (!obj.contains("series") || !obj.at("series").is_array()) {
    throw ConfigError(join(path, "series"), "must be an array");
  }
  const json& series = obj.at("series");
  for (std::size_t k = 0; k < series.size(); ++k) {
    c.series.push_back(parse_series(series[k], join(path, "series[" + std::to_string(k) + "]")));
  }
  if (obj.contains("sweep")) {
    const std::string sp = join(path, "sweep");
    const json& s = object_at(obj, "sweep", path);
    reject_unknown(s, sp, {"parameter", "grid"});
    c.sweep.parameter = parse_enum(text(s, "parameter", sp, std::nullopt), join(sp, "parameter"), sweep_from_string);
    if (s.contains("grid")) {
      const json& g = s.at("grid");
      if (!g.is_array()) throw ConfigError(join(sp, "grid"), "must be an array of numbers");
      for (const auto& v : g) {
        if (!v.is_number()) throw ConfigError(join(sp, "grid"), "must be an array of numbers");
        c.sweep.grid.push_back(v.get<double>());
      }
    }
  }
  c.validate();
  return c;
}

json to_json(const InitialState& s) {
  return {{"family", to_string(s.family)},
          {"f0", s.f0},
          {"gamma_damp", s.gamma_damp},
          {"two_sided", s.two_sided},
          {"coefficients", s.coefficients}};
}

json to_json(const ExperimentConfig& c) {
  json series = json::array();
  for (const auto& s : c.series) {
    series.push_back({{"label", s.label},
                      {"protocol", to_string(s.variant.base)},
                      {"oxford", s.variant.oxford},
                      {"subroutine", to_string(s.variant.subroutine)},
                      {"control_dim", s.variant.control_dim},
                      {"second_cswap", s.variant.second_cswap},
                      {"kept", to_string(s.variant.kept)},
                      {"control", to_string(s.control)},
                      {"twirl_initial", s.twirl_initial},
                      {"q_cswap", s.q_cswap ? json(*s.q_cswap) : json(nullptr)},
                      {"initial", s.initial ? to_json(*s.initial) : json(nullptr)}});
  }
  return {{"name", c.name},
          {"description", c.description},
          {"kind", to_string(c.kind)},
          {"initial", to_json(c.initial)},
          {"noise",
           {{"family", to_string(c.noise.family)},
            {"q_cnot", c.noise.q_cnot},
            {"q_cswap", c.noise.q_cswap},
            {"p_meas", c.noise.p_meas}}},
          {"rounds", c.rounds},
          {"twirl_per_round", c.twirl_per_round},
          {"inter_round_hadamard", c.inter_round_hadamard},
          {"f_target", c.f_target},
          {"series", series},
          {"sweep", {{"parameter", to_string(c.sweep.parameter)}, {"grid", c.sweep.grid}}}};
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

DensityMatrix InitialState::build() const {
  switch (family) {
    case InitialFamily::werner:
      return to_density(BellDiagonalState::werner(f0));
    case InitialFamily::dephasing:
      return to_density(BellDiagonalState({f0, 0.0, 1.0 - f0, 0.0}));
    case InitialFamily::bell_diagonal:
      return to_density(BellDiagonalState(coefficients));
    case InitialFamily::damping: {
      DensityMatrix rho = to_density(BellDiagonalState::werner(1.0));
      const KrausChannel ch = channels::amplitude_damping(gamma_damp);
      if (two_sided) rho = apply_channel(rho, ch, 0);
      return apply_channel(rho, ch, 1);
    }
  }
  throw std::logic_error("unhandled initial family");
}

std::string InitialState::describe() const {
  std::ostringstream os;
  switch (family) {
    case InitialFamily::werner:
      os << "werner(F0=" << f0 << ")";
      break;
    case InitialFamily::dephasing:
      os << "dephasing(F0=" << f0 << ")";
      break;
    case InitialFamily::damping:
      os << "damping(gamma=" << gamma_damp << (two_sided ? ", both sides)" : ", Bob only)");
      break;
    case InitialFamily::bell_diagonal:
      os << "bell_diagonal(" << coefficients[0] << "," << coefficients[1] << "," << coefficients[2] << ","
         << coefficients[3] << ")";
      break;
  }
  return os.str();
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("name", "must not be empty");
  if (name.find_first_of("/\\ ") != std::string::npos) throw ConfigError("name", "must be a plain file stem");
  if (rounds < 1 || rounds > 1000) throw ConfigError("rounds", "must be between 1 and 1000");
  if (series.empty()) throw ConfigError("series", "must not be empty");
  std::set<std::string> labels;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (!labels.insert(series[k].label).second) {
      throw ConfigError("series[" + std::to_string(k) + "].label", "duplicate label '" + series[k].label + "'");
    }
  }
  try {
    noise.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError("noise", e.what());
  }
  if (sweep.parameter == SweepParameter::none && !sweep.grid.empty()) {
    throw ConfigError("sweep.grid", "must be empty without a sweep parameter");
  }
  if (sweep.parameter != SweepParameter::none) {
    if (sweep.grid.empty()) throw ConfigError("sweep.grid", "must not be empty");
    if (!std::is_sorted(sweep.grid.begin(), sweep.grid.end())) throw ConfigError("sweep.grid", "must be sorted");
    for (double v : sweep.grid) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("sweep.grid", "values must lie in [0,1]");
    }
  }
  if (kind == ExperimentKind::regime) {
    if (sweep.parameter != SweepParameter::q) throw ConfigError("sweep.parameter", "regime experiments sweep q");
    if (noise.family == NoiseFamily::none) throw ConfigError("noise.family", "regime experiments need a noise family");
  }
  if (sweep.parameter == SweepParameter::f0) {
    auto f0_family = [](const InitialState& s) {
      return s.family == InitialFamily::werner || s.family == InitialFamily::dephasing;
    };
    bool ok = f0_family(initial);
    for (const auto& s : series) ok = ok && (!s.initial || f0_family(*s.initial));
    if (!ok) throw ConfigError("sweep.parameter", "f0 sweep needs werner or dephasing initial states");
  }
}

NoiseModel ExperimentConfig::noise_at(const SeriesSpec& s, std::optional<double> sweep_value) const {
  NoiseModel m = noise;
  if (sweep_value && sweep.parameter == SweepParameter::q) m.q_cnot = m.q_cswap = m.p_meas = *sweep_value;
  if (sweep_value && sweep.parameter == SweepParameter::q_cswap) m.q_cswap = *sweep_value;
  if (s.q_cswap) m.q_cswap = *s.q_cswap;
  return m;
}

InitialState ExperimentConfig::initial_at(const SeriesSpec& series, std::optional<double> sweep_value) const {
  InitialState s = series.initial ? *series.initial : initial;
  if (sweep_value && sweep.parameter == SweepParameter::f0) s.f0 = *sweep_value;
  return s;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::trajectory:
      return "trajectory";
    case ExperimentKind::yield:
      return "yield";
    case ExperimentKind::regime:
      return "regime";
  }
  return "trajectory";
}

std::string to_string(InitialFamily family) {
  switch (family) {
    case InitialFamily::werner:
      return "werner";
    case InitialFamily::dephasing:
      return "dephasing";
    case InitialFamily::damping:
      return "damping";
    case InitialFamily::bell_diagonal:
      return "bell_diagonal";
  }
  return "werner";
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::none:
      return "none";
    case SweepParameter::q:
      return "q";
    case SweepParameter::f0:
      return "f0";
    case SweepParameter::q_cswap:
      return "q_cswap";
  }
  return "none";
}

std::vector<ExperimentConfig> parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  std::vector<ExperimentConfig> out;
  if (doc.is_object() && doc.contains("experiments")) {
    reject_unknown(doc, "", {"experiments"});
    const json& list = doc.at("experiments");
    if (!list.is_array() || list.empty()) throw ConfigError("experiments", "must be a non-empty array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      out.push_back(parse_experiment(list[k], "experiments[" + std::to_string(k) + "]"));
    }
  } else {
    out.push_back(parse_experiment(doc, ""));
  }
  std::set<std::string> names;
  for (const auto& c : out) {
    if (!names.insert(c.name).second) throw ConfigError("name", "duplicate experiment '" + c.name + "'");
  }
  return out;
}

std::vector<ExperimentConfig> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize(const ExperimentConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string serialize(const std::vector<ExperimentConfig>& configs) {
  if (configs.size() == 1) return serialize(configs.front());
  json list = json::array();
  for (const auto& c : configs) list.push_back(to_json(c));
  return json{{"experiments", list}}.dump(2) + "\n";
}

}  // namespace epsim::harness
