#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epsim/density.hpp"
#include "epsim/gates.hpp"
#include "epsim/noise.hpp"

namespace epsim {

/// Bilateral cNOT: Alice and Bob each apply cNOT from their qubit of pair
/// `control` to their qubit of pair `target`.
struct BilateralCnot {
  int control;
  int target;
};

enum class CheckBasis { z, x };

/// Both sides measure `pair` in `basis`; the round continues only on coincidence.
struct CoincidenceCheck {
  int pair;
  CheckBasis basis;
};

/// Recurrence selection circuit on `num_pairs` pairs; pair 0 survives.
struct SelectionCircuit {
  std::string name;
  int num_pairs;
  std::vector<BilateralCnot> cnots;
  std::vector<CoincidenceCheck> checks;
};

/// bcNOT 0→1, Z-check pair 1.
const SelectionCircuit& single_selection_circuit();
/// bcNOT 0→1, bcNOT 2→1; Z-check pair 1, X-check pair 2 (pair 2 guards pair 1's phase errors).
const SelectionCircuit& double_selection_circuit();
/// Double selection followed by bcNOT 3→0 with an X-check on pair 3.
const SelectionCircuit& triple_selection_circuit();

/// Human-readable gate listing, one operation per line.
std::string describe(const SelectionCircuit& circuit);

/// Local pre-round dressing applied to every data pair.
struct Dressing {
  bool oxford = false;    // U_O(A) ⊗ U_O(B)
  bool hadamard = false;  // H ⊗ H, after U_O
};

/// Coherent role control: a pair of local control registers of dimension D,
/// one per side, driving a controlled role permutation of the data pairs.
struct RoleControl {
  DensityMatrix state;  // dims {D, D}: Alice's control, Bob's control
  RolePermutationTable roles;
  bool second_cswap = false;
};

/// Label of one post-selection branch.
struct BranchKey {
  std::vector<int> checks;  // common outcome of each coincidence check, circuit order
  int control_alice = -1;   // Fourier-basis outcome, -1 without role control
  int control_bob = -1;

  bool all_checks_zero() const;
  /// (a + b) mod D; 0 for the outcomes a perfect control pair can produce.
  int control_parity(int control_dim) const;
  std::string to_string() const;

  friend bool operator==(const BranchKey&, const BranchKey&) = default;
};

struct BranchEntry {
  BranchKey key;
  DensityMatrix state;  // unnormalized surviving pair, dims {2, 2}
  double weight() const { return state.trace(); }
};

/// Every coincident outcome combination of a circuit run, unnormalized.
struct BranchTable {
  std::vector<BranchEntry> entries;
  int control_dim = 0;  // 0 without role control
};

/// Runs the circuit exactly. Layout of the composite register:
/// [Alice control, Bob control,] A0, B0, A1, B1, ...
/// Order: dressing on each data pair, cSWAP on each side, bilateral cNOTs,
/// optional second cSWAP, then the checks and the control readout.
BranchTable execute(const SelectionCircuit& circuit, std::span<const DensityMatrix> pairs,
                    const std::optional<RoleControl>& control, const Dressing& dressing, const NoiseModel& model);

}  // namespace epsim
