#pragma once

#include <array>
#include <span>

#include "epsim/bell.hpp"
#include "epsim/circuit.hpp"

namespace epsim {

/// Unnormalized Bell-label weights of the surviving pair after a circuit.
struct LabelOutcome {
  std::array<double, 4> weights{};  // ordinal order, sums to success_probability
  double success_probability = 0.0;

  /// Throws std::domain_error when nothing survives.
  BellDiagonalState normalized() const;
};

/// Propagates Bell labels through a noiseless circuit on Bell-diagonal inputs.
/// A bcNOT c→t maps (i_c, j_c), (i_t, j_t) to (i_c ⊕ i_t, j_c), (i_t, j_t ⊕ j_c);
/// a Z check passes iff the checked pair's flip bit is 0, an X check iff its phase bit is 0.
LabelOutcome propagate_labels(const SelectionCircuit& circuit, std::span<const BellDiagonalState> inputs);

/// Bilateral H⊗H in label form: swaps the 01 and 10 weights.
BellDiagonalState hadamard_relabel(const BellDiagonalState& state);

}  // namespace epsim
