#include "epsim/harness/experiments.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace epsim::harness {
namespace {

SeriesSpec series(std::string label, ProtocolKind base, bool oxford, Subroutine sub, int control_dim = 2) {
  SeriesSpec s;
  s.label = std::move(label);
  s.variant.base = base;
  s.variant.oxford = oxford;
  s.variant.subroutine = sub;
  s.variant.control_dim = control_dim;
  return s;
}

SeriesSpec twirled(SeriesSpec s) {
  s.label += "_werner";
  s.twirl_initial = true;
  return s;
}

// 1.000 down to 0.850 in steps of 0.005, stored ascending.
std::vector<double> q_grid() {
  std::vector<double> g;
  for (int k = 30; k >= 0; --k) g.push_back(std::round((1.0 - 0.005 * k) * 1000.0) / 1000.0);
  return g;
}

std::vector<SeriesSpec> three_copy_set(bool oxford) {
  return {series("single", ProtocolKind::single, oxford, Subroutine::adaptive),
          series("double", ProtocolKind::double_selection, oxford, Subroutine::adaptive),
          series("superposed", ProtocolKind::superposed_single, oxford, Subroutine::adaptive)};
}

std::vector<ExperimentConfig> build() {
  std::vector<ExperimentConfig> out;

  {
    // "for the BBPSSW P1-or-P2 EPPs with initial states affected (both sides) by
    //  amplitude damping noise of strength q=0.6"
    ExperimentConfig c;
    c.name = "fig3a";
    c.description = "fidelity vs round, P1-or-P2, damped initial pairs (gamma 0.4, both sides), noiseless gates";
    c.kind = ExperimentKind::trajectory;
    c.initial.family = InitialFamily::damping;
    c.initial.gamma_damp = 0.4;
    c.initial.two_sided = true;
    c.rounds = 8;
    for (const auto& s : three_copy_set(false)) {
      c.series.push_back(s);
      c.series.push_back(twirled(s));
    }
    out.push_back(c);
  }
  {
    // "different P1-or-P2 Oxford variation protocols with initial states of
    //  fidelity F0=0.6 and dephasing noise"
    ExperimentConfig c;
    c.name = "fig3b";
    c.description = "infidelity vs round, Oxford P1-or-P2, dephasing initial pairs F0 0.6, noiseless gates";
    c.initial.family = InitialFamily::dephasing;
    c.initial.f0 = 0.6;
    c.rounds = 6;
    for (const auto& s : three_copy_set(true)) {
      c.series.push_back(s);
      c.series.push_back(twirled(s));
    }
    out.push_back(c);
  }
  {
    // "Operational noise is modeled by local amplitude damping noise with
    //  parameter q acting on each qubit involved in a gate"
    ExperimentConfig c;
    c.name = "fig4a";
    c.description = "operational regime vs q, damping gate and readout noise, Oxford P1-or-P2, Werner inputs";
    c.kind = ExperimentKind::regime;
    c.initial.family = InitialFamily::werner;
    c.noise.family = NoiseFamily::damping;
    c.series = three_copy_set(true);
    c.sweep = {SweepParameter::q, q_grid()};
    out.push_back(c);
  }
  {
    // "Yield for the Oxford variation with 3% of operational damping noise,
    //  i.e., q_cnot=q_cSWAP=0.97 and initial Werner states with F_target=0.95"
    ExperimentConfig c;
    c.name = "fig4b";
    c.description = "yield vs round at q 0.97 damping, Oxford P1-or-P2, Werner F0 0.9, F_target 0.95";
    c.kind = ExperimentKind::yield;
    c.initial.family = InitialFamily::werner;
    c.initial.f0 = 0.9;
    c.noise = {NoiseFamily::damping, 0.97, 0.97, 0.97};
    c.rounds = 12;
    c.f_target = 0.95;
    c.series = three_copy_set(true);
    out.push_back(c);
  }
  {
    // "Operational regimes for Werner states and local depolarizing gate and
    //  measurement noise for different strengths of the cSWAP gate noise"
    ExperimentConfig c;
    c.name = "fig6a";
    c.description = "operational regime vs q, depolarizing noise, superposed at q_cswap 1, 0.99, 0.97";
    c.kind = ExperimentKind::regime;
    c.initial.family = InitialFamily::werner;
    c.noise.family = NoiseFamily::depolarizing;
    c.series.push_back(series("single", ProtocolKind::single, true, Subroutine::adaptive));
    c.series.push_back(series("double", ProtocolKind::double_selection, true, Subroutine::adaptive));
    for (double qs : {1.0, 0.99, 0.97}) {
      std::ostringstream label;
      label << "superposed_qcswap_" << qs;
      SeriesSpec s = series(label.str(), ProtocolKind::superposed_single, true, Subroutine::adaptive);
      s.q_cswap = qs;
      c.series.push_back(s);
    }
    c.sweep = {SweepParameter::q, q_grid()};
    out.push_back(c);
  }
  {
    // "Fidelity evolution under noisy operations modeled by
    //  xi_depo o xi_damp o xi_deph with strength of 1% and 3%"
    ExperimentConfig c;
    c.name = "fig6b";
    c.description = "fidelity vs round under composite depo.damp.deph noise at 1% and 3%, Werner F0 0.8";
    c.initial.family = InitialFamily::werner;
    c.initial.f0 = 0.8;
    c.noise.family = NoiseFamily::composite;
    c.rounds = 10;
    c.series = three_copy_set(true);
    c.sweep = {SweepParameter::q, {0.97, 0.99}};
    out.push_back(c);
  }
  {
    // "Infidelity evolution as a function of the number iterations for the
    //  different protocols and initial Werner states with fidelity F0=0.92"
    ExperimentConfig c;
    c.name = "fig7";
    c.description = "infidelity vs round, noiseless, Werner F0 0.92, depolarized after each round";
    c.initial.family = InitialFamily::werner;
    c.initial.f0 = 0.92;
    c.rounds = 4;
    c.twirl_per_round = true;
    c.series = {series("single", ProtocolKind::single, false, Subroutine::p2),
                series("double", ProtocolKind::double_selection, false, Subroutine::p2),
                series("triple", ProtocolKind::triple_selection, false, Subroutine::p2),
                series("superposed_double_D3", ProtocolKind::superposed_double, false, Subroutine::p2, 3),
                series("superposed_double_D6", ProtocolKind::superposed_double, false, Subroutine::p2, 6)};
    out.push_back(c);
  }
  {
    // "Pauli diagonal elements evolution for the different EPPs for different
    //  initial Pauli errors and Werner states"
    ExperimentConfig c;
    c.name = "appendixA";
    c.description = "Bell-diagonal coefficients vs round, Oxford, noiseless, each single Pauli error and Werner at F0 0.6";
    c.initial.family = InitialFamily::werner;
    c.initial.f0 = 0.6;
    c.rounds = 6;
    const std::array<std::pair<const char*, std::array<double, 4>>, 4> errors{{
        {"flip", {0.6, 0.4, 0.0, 0.0}},
        {"phase", {0.6, 0.0, 0.4, 0.0}},
        {"both", {0.6, 0.0, 0.0, 0.4}},
        {"werner", {0.6, 0.4 / 3, 0.4 / 3, 0.4 / 3}},
    }};
    for (const auto& [error, p] : errors) {
      InitialState init;
      init.family = InitialFamily::bell_diagonal;
      init.coefficients = p;
      for (auto s : {series("oxford", ProtocolKind::single, true, Subroutine::p2),
                     series("double", ProtocolKind::double_selection, true, Subroutine::p2),
                     series("superposed", ProtocolKind::superposed_single, true, Subroutine::p2)}) {
        s.label += std::string("/") + error;
        s.initial = init;
        c.series.push_back(s);
      }
    }
    out.push_back(c);
  }
  for (const auto& c : out) c.validate();
  return out;
}

}  // namespace

const std::vector<ExperimentConfig>& builtin_experiments() {
  static const std::vector<ExperimentConfig> all = build();
  return all;
}

std::optional<ExperimentConfig> find_builtin(const std::string& name) {
  for (const auto& c : builtin_experiments()) {
    if (c.name == name) return c;
  }
  return std::nullopt;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& c : builtin_experiments()) names.push_back(c.name);
  return names;
}

std::string catalog() {
  std::ostringstream os;
  for (const auto& c : builtin_experiments()) {
    os << c.name << "\t" << to_string(c.kind) << "\t" << c.initial.describe() << "\tnoise=" << to_string(c.noise.family);
    if (c.noise.family != NoiseFamily::none && c.sweep.parameter != SweepParameter::q) {
      os << "(q_cnot=" << c.noise.q_cnot << ",q_cswap=" << c.noise.q_cswap << ",p_meas=" << c.noise.p_meas << ")";
    }
    if (c.sweep.parameter != SweepParameter::none) {
      os << "\tsweep " << to_string(c.sweep.parameter) << " " << c.sweep.grid.front() << ".." << c.sweep.grid.back()
         << " (" << c.sweep.grid.size() << " points)";
    }
    os << "\trounds=" << c.rounds << "\t" << c.description << "\n";
  }
  return os.str();
}

}  // namespace epsim::harness
