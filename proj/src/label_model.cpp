#include "epsim/label_model.hpp"

#include <stdexcept>
#include <vector>

namespace epsim {

BellDiagonalState LabelOutcome::normalized() const {
  if (success_probability <= 0.0) throw std::domain_error("no surviving weight to normalize");
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) p[k] = weights[k] / success_probability;
  return BellDiagonalState(p);
}

LabelOutcome propagate_labels(const SelectionCircuit& circuit, std::span<const BellDiagonalState> inputs) {
  const int n = circuit.num_pairs;
  if (static_cast<int>(inputs.size()) != n) throw std::invalid_argument("label model: wrong number of inputs");
  LabelOutcome out;
  std::vector<int> phase(n), flip(n);
  int combos = 1;
  for (int k = 0; k < n; ++k) combos *= 4;
  for (int code = 0; code < combos; ++code) {
    double w = 1.0;
    int rest = code;
    for (int k = 0; k < n; ++k) {
      const BellIndex idx = BellIndex::from_ordinal(rest % 4);
      rest /= 4;
      phase[k] = idx.phase;
      flip[k] = idx.flip;
      w *= inputs[k][idx];
    }
    if (w == 0.0) continue;
    for (const auto& g : circuit.cnots) {
      phase[g.control] ^= phase[g.target];
      flip[g.target] ^= flip[g.control];
    }
    bool pass = true;
    for (const auto& c : circuit.checks) pass = pass && (c.basis == CheckBasis::z ? flip[c.pair] : phase[c.pair]) == 0;
    if (!pass) continue;
    out.weights[2 * phase[0] + flip[0]] += w;
    out.success_probability += w;
  }
  return out;
}

BellDiagonalState hadamard_relabel(const BellDiagonalState& state) {
  const auto& p = state.coefficients();
  return BellDiagonalState({p[0], p[2], p[1], p[3]});
}

}  // namespace epsim
