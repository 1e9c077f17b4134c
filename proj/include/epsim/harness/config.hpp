#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epsim/metrics.hpp"
#include "epsim/noise.hpp"
#include "epsim/protocols.hpp"

namespace epsim::harness {

/// Invalid configuration; `field()` is the dotted path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ExperimentKind { trajectory, yield, regime };

enum class InitialFamily {
  werner,         // werner(f0)
  dephasing,      // f0 |Φ00⟩⟨Φ00| + (1 − f0) |Φ10⟩⟨Φ10|
  damping,        // amplitude damping γ on |Φ00⟩, one or both sides
  bell_diagonal,  // explicit coefficients
};

struct InitialState {
  InitialFamily family = InitialFamily::werner;
  double f0 = 0.9;
  double gamma_damp = 0.0;
  bool two_sided = true;
  std::array<double, 4> coefficients{1.0, 0.0, 0.0, 0.0};

  DensityMatrix build() const;
  std::string describe() const;
};

struct SeriesSpec {
  std::string label;
  ProtocolVariant variant;
  ControlSource control = ControlSource::identical;
  bool twirl_initial = false;       // start from the Werner projection of the initial state
  std::optional<double> q_cswap;    // overrides the noise model's cSWAP strength
  std::optional<InitialState> initial;  // overrides the experiment's initial state
};

enum class SweepParameter { none, q, f0, q_cswap };

struct Sweep {
  SweepParameter parameter = SweepParameter::none;
  std::vector<double> grid;
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  ExperimentKind kind = ExperimentKind::trajectory;
  InitialState initial;
  NoiseModel noise;
  int rounds = 5;
  bool twirl_per_round = false;
  bool inter_round_hadamard = false;
  double f_target = 0.95;
  std::vector<SeriesSpec> series;
  Sweep sweep;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
  /// Noise model and initial state at one sweep value for one series.
  NoiseModel noise_at(const SeriesSpec& s, std::optional<double> sweep_value) const;
  InitialState initial_at(const SeriesSpec& s, std::optional<double> sweep_value) const;
};

std::string to_string(ExperimentKind kind);
std::string to_string(InitialFamily family);
std::string to_string(SweepParameter p);

/// Parses a JSON document holding one experiment object or {"experiments": [...]}.
std::vector<ExperimentConfig> parse_config(const std::string& text);
std::vector<ExperimentConfig> load_config_file(const std::string& path);

/// Canonical JSON text: every field present, keys sorted, two-space indent.
std::string serialize(const std::vector<ExperimentConfig>& configs);
std::string serialize(const ExperimentConfig& config);

}  // namespace epsim::harness
