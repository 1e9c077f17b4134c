#include "epsim/circuit.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace epsim {
namespace {

DensityMatrix dress(const DensityMatrix& pair, const Dressing& dressing) {
  DensityMatrix out = pair;
  const int alice[] = {0};
  const int bob[] = {1};
  if (dressing.oxford) {
    out = apply_unitary(out, gate_u_oxford(Side::alice), alice);
    out = apply_unitary(out, gate_u_oxford(Side::bob), bob);
  }
  if (dressing.hadamard) {
    out = apply_unitary(out, gate_hadamard(), alice);
    out = apply_unitary(out, gate_hadamard(), bob);
  }
  return out;
}

Matrix check_effect(CheckBasis basis, int outcome, double p_meas) {
  static const MeasurementBasis z = MeasurementBasis::z();
  static const MeasurementBasis x = MeasurementBasis::x();
  return (basis == CheckBasis::z ? z : x).effect(outcome, p_meas);
}

}  // namespace

const SelectionCircuit& single_selection_circuit() {
  static const SelectionCircuit c{"single_selection", 2, {{0, 1}}, {{1, CheckBasis::z}}};
  return c;
}

const SelectionCircuit& double_selection_circuit() {
  static const SelectionCircuit c{
      "double_selection", 3, {{0, 1}, {2, 1}}, {{1, CheckBasis::z}, {2, CheckBasis::x}}};
  return c;
}

const SelectionCircuit& triple_selection_circuit() {
  static const SelectionCircuit c{"triple_selection",
                                  4,
                                  {{0, 1}, {2, 1}, {3, 0}},
                                  {{1, CheckBasis::z}, {2, CheckBasis::x}, {3, CheckBasis::x}}};
  return c;
}

std::string describe(const SelectionCircuit& circuit) {
  std::ostringstream os;
  os << circuit.name << " (" << circuit.num_pairs << " pairs, pair 0 survives)\n";
  for (const auto& g : circuit.cnots) os << "  bcNOT " << g.control << " -> " << g.target << "\n";
  for (const auto& c : circuit.checks) {
    os << "  check pair " << c.pair << " in " << (c.basis == CheckBasis::z ? "Z" : "X") << ", keep coincidence\n";
  }
  return os.str();
}

bool BranchKey::all_checks_zero() const {
  return std::all_of(checks.begin(), checks.end(), [](int c) { return c == 0; });
}

int BranchKey::control_parity(int control_dim) const {
  if (control_alice < 0) return 0;
  return (control_alice + control_bob) % control_dim;
}

std::string BranchKey::to_string() const {
  std::ostringstream os;
  os << "z/x=(";
  for (std::size_t k = 0; k < checks.size(); ++k) os << (k ? "," : "") << checks[k];
  os << ")";
  if (control_alice >= 0) os << " c=(" << control_alice << "," << control_bob << ")";
  return os.str();
}

BranchTable execute(const SelectionCircuit& circuit, std::span<const DensityMatrix> pairs,
                    const std::optional<RoleControl>& control, const Dressing& dressing, const NoiseModel& model) {
  if (static_cast<int>(pairs.size()) != circuit.num_pairs) {
    throw std::invalid_argument(circuit.name + " expects " + std::to_string(circuit.num_pairs) + " pairs");
  }
  model.validate();
  std::vector<DensityMatrix> parts;
  const int offset = control ? 2 : 0;
  int control_dim = 0;
  if (control) {
    control_dim = control->roles.control_dim();
    if (control->state.dims() != Dims{control_dim, control_dim}) {
      throw std::invalid_argument("control state dims do not match the role table");
    }
    if (control->roles.num_slots() != circuit.num_pairs) {
      throw std::invalid_argument("role table slots do not match the number of pairs");
    }
    parts.push_back(control->state);
  }
  for (const auto& p : pairs) {
    if (p.dims() != Dims{2, 2}) throw std::invalid_argument("data pairs must be two-qubit states");
    parts.push_back(dress(p, dressing));
  }
  DensityMatrix rho = tensor(parts);

  auto alice = [&](int pair) { return offset + 2 * pair; };
  auto bob = [&](int pair) { return offset + 2 * pair + 1; };

  auto cswap = [&](const DensityMatrix& in) {
    const Matrix u = gate_cswap(control->roles);
    std::vector<int> side_a{0}, side_b{1};
    for (int k = 0; k < circuit.num_pairs; ++k) {
      side_a.push_back(alice(k));
      side_b.push_back(bob(k));
    }
    DensityMatrix out = noisy_gate(in, u, side_a, model, GateKind::cswap);
    return noisy_gate(out, u, side_b, model, GateKind::cswap);
  };

  if (control) rho = cswap(rho);
  const Matrix cnot = gate_cnot();
  for (const auto& g : circuit.cnots) {
    const int ta[] = {alice(g.control), alice(g.target)};
    const int tb[] = {bob(g.control), bob(g.target)};
    rho = noisy_gate(rho, cnot, ta, model, GateKind::cnot);
    rho = noisy_gate(rho, cnot, tb, model, GateKind::cnot);
  }
  if (control && control->second_cswap) rho = cswap(rho);

  // Checked pairs are discarded from the highest pair index down so that
  // subsystem indices of the remaining registers stay valid.
  std::vector<int> order(circuit.checks.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return circuit.checks[a].pair > circuit.checks[b].pair; });
  for (const auto& c : circuit.checks) {
    if (c.pair == 0 || c.pair >= circuit.num_pairs) throw std::invalid_argument("invalid checked pair");
  }

  BranchTable table;
  table.control_dim = control_dim;
  std::vector<int> outcomes(circuit.checks.size(), 0);
  const MeasurementBasis fourier = MeasurementBasis::fourier(std::max(control_dim, 2));

  std::function<void(const DensityMatrix&, std::size_t)> descend = [&](const DensityMatrix& state, std::size_t depth) {
    if (depth == order.size()) {
      BranchKey key{outcomes, -1, -1};
      if (!control) {
        table.entries.push_back({key, state});
        return;
      }
      for (int a = 0; a < control_dim; ++a) {
        const DensityMatrix after_alice = measure_and_discard(state, 0, fourier.effect(a, model.p_meas));
        for (int b = 0; b < control_dim; ++b) {
          key.control_alice = a;
          key.control_bob = b;
          table.entries.push_back({key, measure_and_discard(after_alice, 0, fourier.effect(b, model.p_meas))});
        }
      }
      return;
    }
    const auto& check = circuit.checks[order[depth]];
    for (int o = 0; o < 2; ++o) {
      const Matrix e = check_effect(check.basis, o, model.p_meas);
      const DensityMatrix reduced = measure_and_discard(measure_and_discard(state, bob(check.pair), e), alice(check.pair), e);
      outcomes[order[depth]] = o;
      descend(reduced, depth + 1);
    }
  };
  descend(rho, 0);
  return table;
}

}  // namespace epsim
