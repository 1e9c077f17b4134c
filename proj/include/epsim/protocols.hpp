#pragma once

#include <optional>
#include <span>
#include <string>

#include "epsim/circuit.hpp"
#include "epsim/density.hpp"
#include "epsim/noise.hpp"

namespace epsim {

enum class ProtocolKind { single, double_selection, triple_selection, superposed_single, superposed_double };

/// P1 applies a bilateral H to every data pair before the round, P2 does not;
/// adaptive runs both and keeps the higher output fidelity (ties go to P2).
enum class Subroutine { p1, p2, adaptive };

/// Which coincident branches are kept.
enum class KeptSet {
  automatic,      // all for non-superposed, standard for superposed_single, favorable for superposed_double
  all,            // every coincident check pattern, any control outcome
  standard,       // checks all 0 with any control outcome, or any other pattern with control parity 0
  coherent_only,  // control parity 0 and at least one check outcome 1
  favorable,      // per check pattern, control outcomes at least as good as the pattern average
};

std::string to_string(ProtocolKind kind);
ProtocolKind protocol_kind_from_string(const std::string& name);
std::string to_string(Subroutine sub);
Subroutine subroutine_from_string(const std::string& name);
std::string to_string(KeptSet kept);
KeptSet kept_set_from_string(const std::string& name);

struct ProtocolVariant {
  ProtocolKind base = ProtocolKind::single;
  bool oxford = false;
  Subroutine subroutine = Subroutine::p2;
  int control_dim = 2;  // 2 for superposed_single, 3 or 6 for superposed_double
  bool second_cswap = false;
  KeptSet kept = KeptSet::automatic;

  /// Throws std::invalid_argument on an inconsistent combination.
  void validate() const;
  bool superposed() const noexcept {
    return base == ProtocolKind::superposed_single || base == ProtocolKind::superposed_double;
  }
  int data_pairs() const noexcept;
  /// Raw pairs consumed per round; a D-dim control counts as log2 D pairs.
  double copies_consumed() const;
  KeptSet effective_kept() const noexcept;
  std::string describe() const;

  friend bool operator==(const ProtocolVariant&, const ProtocolVariant&) = default;
};

struct ProtocolOutcome {
  DensityMatrix output;  // normalized surviving pair
  double success_probability = 0.0;
  double copies_consumed = 0.0;
  std::string kept_outcomes;
  Subroutine subroutine_used = Subroutine::p2;

  double fidelity() const;
};

/// Raised when no kept branch carries weight.
class NoSurvivorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProtocolOutcome single_selection(const DensityMatrix& rho1, const DensityMatrix& rho2, const ProtocolVariant& v,
                                 const NoiseModel& nm);
ProtocolOutcome double_selection(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                                 const ProtocolVariant& v, const NoiseModel& nm);
ProtocolOutcome triple_selection(std::span<const DensityMatrix> pairs, const ProtocolVariant& v,
                                 const NoiseModel& nm);
/// Two data pairs whose roles are exchanged coherently by a qubit control pair.
ProtocolOutcome superposed_role_exchange(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                         const DensityMatrix& control, const ProtocolVariant& v,
                                         const NoiseModel& nm);
/// Double selection with the three roles permuted by a D-dim control pair
/// (D = 3: cyclic shifts, D = 6: every assignment).
ProtocolOutcome superposed_double_selection(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                            const DensityMatrix& rho3, const DensityMatrix& control,
                                            const ProtocolVariant& v, const NoiseModel& nm);

/// Dispatches on v.base. `control` is required for the superposed kinds.
ProtocolOutcome run_protocol(const ProtocolVariant& v, std::span<const DensityMatrix> pairs,
                             const std::optional<DensityMatrix>& control, const NoiseModel& nm);

/// (H⊗H)ρ(H⊗H): exchanges the Φ01 and Φ10 populations.
DensityMatrix inter_round_hadamard(const DensityMatrix& rho);

/// F_c|Φ_D⟩⟨Φ_D| + (1 − F_c)(I − |Φ_D⟩⟨Φ_D|)/(D² − 1) with F_c = F^{log2 D}
/// and |Φ_D⟩ = Σ_k |kk⟩/√D.
DensityMatrix make_control_state(int control_dim, double fidelity);

/// Role table driven by the control of a superposed variant.
RolePermutationTable role_table(const ProtocolVariant& v);

/// Circuit run by the data pairs of a variant.
const SelectionCircuit& circuit_for(ProtocolKind kind);

/// Sum of the kept entries of a branch table, unnormalized, with a description of the kept set.
struct KeptBranches {
  DensityMatrix state;
  std::string description;
};
KeptBranches select_branches(const BranchTable& table, KeptSet kept);

}  // namespace epsim
