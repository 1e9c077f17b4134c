#pragma once

#include <span>
#include <vector>

#include "epsim/types.hpp"

namespace epsim {

class KrausChannel;
class MeasurementBasis;

/// Operator over an ordered list of subsystems of arbitrary local dimension.
///
/// Subsystem 0 is the most significant digit of the row/column index. A
/// DensityMatrix is immutable: every engine operation returns a new value.
/// Post-selection branches are also represented by this type; they carry
/// trace < 1 until normalized() is called.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, Matrix data);

  static DensityMatrix from_pure(Dims dims, const Vector& psi);
  static DensityMatrix maximally_mixed(Dims dims);

  const Dims& dims() const noexcept { return dims_; }
  const Matrix& data() const noexcept { return data_; }
  Index dim() const noexcept { return data_.rows(); }
  int num_subsystems() const noexcept { return static_cast<int>(dims_.size()); }

  double trace() const;
  DensityMatrix normalized() const;
  DensityMatrix scaled(double factor) const;

  /// max |ρ − ρ†|
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
  /// Hermitian, trace 1 and PSD within the engine tolerances.
  bool is_valid_state() const;

  DensityMatrix operator+(const DensityMatrix& other) const;

 private:
  Dims dims_;
  Matrix data_;
};

Index total_dimension(const Dims& dims);

DensityMatrix tensor(std::span<const DensityMatrix> states);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// U ρ U† with U acting on the listed subsystems (in the listed order).
/// Throws std::invalid_argument on dimension mismatch or a non-unitary U.
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u, std::span<const int> targets);

/// K ρ K† for an arbitrary (not necessarily unitary) local operator K.
DensityMatrix apply_operator(const DensityMatrix& rho, const Matrix& k, std::span<const int> targets);

/// Σ_i K_i ρ K_i† on one subsystem.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel, int target);

/// Reduced state on `keep` (sorted ascending, in original subsystem order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Tr_target(E ρ): applies a POVM effect and discards the measured subsystem.
/// The result is unnormalized; its trace is the outcome probability.
DensityMatrix measure_and_discard(const DensityMatrix& rho, int target, const Matrix& effect);

struct Branch {
  DensityMatrix state;  // unnormalized
  double probability;
};

/// Projective measurement keeping the measured subsystem: P ρ P and Tr(P ρ P).
Branch measure(const DensityMatrix& rho, int target, const MeasurementBasis& basis, int outcome);

}  // namespace epsim
