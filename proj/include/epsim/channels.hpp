#pragma once

#include <span>
#include <string>
#include <vector>

#include "epsim/types.hpp"

namespace epsim {

/// max |Σ K†K − 1|
double cptp_deviation(std::span<const Matrix> ops);

/// Completely-positive trace-preserving map on one subsystem, as a Kraus list.
/// Construction fails with std::invalid_argument unless Σ K†K = 1 within kTolerance.
class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> ops, std::string label, double strength);

  const std::vector<Matrix>& ops() const noexcept { return ops_; }
  const std::string& label() const noexcept { return label_; }
  double strength() const noexcept { return strength_; }
  int dim() const noexcept { return static_cast<int>(ops_.front().rows()); }

  /// Liouville matrix S with vec(ξ(B)) = S vec(B), row-major vec.
  const Matrix& superoperator() const noexcept { return super_; }

 private:
  std::vector<Matrix> ops_;
  std::string label_;
  double strength_;
  Matrix super_;
};

namespace channels {

KrausChannel identity(int dim);

/// ρ → qρ + (1−q) σ_z ρ σ_z
KrausChannel dephasing(double q);

/// ρ → qρ + (1−q)/4 Σ_i σ_i ρ σ_i  =  qρ + (1−q) I/2
KrausChannel depolarizing(double q);

/// Qudit white noise ρ → qρ + (1−q) I/d, written over the d² Weyl operators.
KrausChannel qudit_depolarizing(double q, int dim);

/// Amplitude damping with decay probability γ.
KrausChannel amplitude_damping(double gamma);

/// Pointwise products: the channel `second ∘ first`.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

/// first ⊗ second acting on a subsystem of dimension first.dim() · second.dim().
KrausChannel tensor(const KrausChannel& first, const KrausChannel& second);

}  // namespace channels

enum class BasisKind { z, x, fourier };

/// Orthonormal measurement basis on one subsystem, with outcome projectors.
class MeasurementBasis {
 public:
  static MeasurementBasis z(int dim = 2);
  static MeasurementBasis x();
  /// |f_m⟩ = Σ_k ω^{mk} |k⟩ / √D.  For D = 2 this coincides with the X basis.
  static MeasurementBasis fourier(int dim);

  BasisKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(vectors_.size()); }
  int num_outcomes() const noexcept { return dim(); }
  const Vector& vector(int outcome) const { return vectors_.at(outcome); }
  Matrix projector(int outcome) const;

  /// POVM effect for a readout that reports the right outcome with probability p;
  /// the remaining weight 1−p is spread uniformly over the wrong outcomes.
  Matrix effect(int outcome, double p_correct) const;

 private:
  MeasurementBasis(BasisKind kind, std::vector<Vector> vectors);
  BasisKind kind_;
  std::vector<Vector> vectors_;
};

}  // namespace epsim
