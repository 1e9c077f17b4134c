#pragma once

#include <vector>

#include "epsim/types.hpp"

namespace epsim {

enum class Side { alice, bob };

/// Control qubit first, target second.
Matrix gate_cnot();
Matrix gate_hadamard();

/// Oxford rotation: Alice |0⟩ → (|0⟩ − i|1⟩)/√2, Bob |0⟩ → (|0⟩ + i|1⟩)/√2.
Matrix gate_u_oxford(Side side);

/// For each control value k, `slots[k][pos]` names the slot whose content
/// moves into slot `pos`. Every row must be a permutation of 0..n-1.
class RolePermutationTable {
 public:
  explicit RolePermutationTable(std::vector<std::vector<int>> slots);

  /// Control 0 keeps the roles, control 1 swaps two slots.
  static RolePermutationTable swap_pair();
  /// Control i ≥ 1 swaps slot 0 with slot i (d-dimensional Fredkin form).
  static RolePermutationTable fredkin(int control_dim);
  /// Control k cycles the slots by k positions.
  static RolePermutationTable cyclic(int slots);
  /// All n! role assignments in lexicographic order; control 0 is the identity.
  static RolePermutationTable all_permutations(int slots);

  int control_dim() const noexcept { return static_cast<int>(slots_.size()); }
  int num_slots() const noexcept { return static_cast<int>(slots_.front().size()); }
  const std::vector<int>& permutation(int control_value) const { return slots_.at(control_value); }

 private:
  std::vector<std::vector<int>> slots_;
};

/// Controlled role permutation on (control of dim D) ⊗ (n qubits):
/// |k⟩⟨k| ⊗ P_k summed over control values, a block-diagonal permutation.
Matrix gate_cswap(const RolePermutationTable& table);

}  // namespace epsim
