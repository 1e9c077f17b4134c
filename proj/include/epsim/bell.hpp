#pragma once

#include <array>
#include <string>

#include "epsim/density.hpp"

namespace epsim {

/// Label of a Bell state |Φ_ij⟩ = (1 ⊗ σ_x^j σ_z^i)|Φ00⟩.
/// `phase` is the σ_z power i, `flip` the σ_x power j.
struct BellIndex {
  int phase = 0;
  int flip = 0;

  BellIndex() = default;
  BellIndex(int phase_bit, int flip_bit);

  /// Position in the coefficient order (00, 01, 10, 11).
  int ordinal() const noexcept { return 2 * phase + flip; }
  static BellIndex from_ordinal(int ordinal);

  friend bool operator==(const BellIndex&, const BellIndex&) = default;
};

/// |Φ_ij⟩ on the (Alice, Bob) qubit pair, computational order |00⟩,|01⟩,|10⟩,|11⟩.
Vector bell_state(BellIndex idx);

/// Mixture Σ p_ij |Φ_ij⟩⟨Φ_ij| of the four Bell states.
class BellDiagonalState {
 public:
  /// Coefficients in the order (p00, p01, p10, p11). Throws std::domain_error
  /// unless they are nonnegative and sum to one within kTolerance.
  explicit BellDiagonalState(std::array<double, 4> coefficients);

  /// F|Φ00⟩⟨Φ00| + (1−F)/3 on each error state. Throws for F ∉ [0,1].
  static BellDiagonalState werner(double fidelity);

  double fidelity() const noexcept { return p_[0]; }
  double operator[](BellIndex idx) const noexcept { return p_[idx.ordinal()]; }
  const std::array<double, 4>& coefficients() const noexcept { return p_; }

  std::string to_string() const;

 private:
  std::array<double, 4> p_;
};

DensityMatrix to_density(const BellDiagonalState& state);

/// Bell twirl: p_ij = ⟨Φ_ij|ρ|Φ_ij⟩.
BellDiagonalState bell_diagonal_part(const DensityMatrix& rho);

/// Full twirl onto the Werner family, keeping ⟨Φ00|ρ|Φ00⟩.
BellDiagonalState depolarize_to_werner(const DensityMatrix& rho);

/// ⟨Φ00|ρ|Φ00⟩
double fidelity_to_reference(const DensityMatrix& rho);

/// Largest off-diagonal magnitude of ρ written in the Bell basis.
double bell_off_diagonal(const DensityMatrix& rho);

/// ρ expressed in the Bell basis, rows/columns in ordinal order.
Matrix in_bell_basis(const DensityMatrix& rho);

}  // namespace epsim
