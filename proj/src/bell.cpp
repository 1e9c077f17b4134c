#include "epsim/bell.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace epsim {
namespace {

void require_pair(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) throw std::invalid_argument("expected a two-qubit pair state");
}

Matrix bell_basis() {
  Matrix b(4, 4);
  for (int k = 0; k < 4; ++k) b.col(k) = bell_state(BellIndex::from_ordinal(k));
  return b;
}

}  // namespace

BellIndex::BellIndex(int phase_bit, int flip_bit) : phase(phase_bit), flip(flip_bit) {
  if ((phase_bit != 0 && phase_bit != 1) || (flip_bit != 0 && flip_bit != 1)) {
    throw std::invalid_argument("Bell index bits must be 0 or 1");
  }
}

BellIndex BellIndex::from_ordinal(int ordinal) {
  if (ordinal < 0 || ordinal > 3) throw std::invalid_argument("Bell ordinal must be in 0..3");
  return BellIndex(ordinal >> 1, ordinal & 1);
}

Vector bell_state(BellIndex idx) {
  const double s = 1.0 / std::sqrt(2.0);
  // σ_x^j σ_z^i on Bob's qubit of (|00⟩ + |11⟩)/√2
  const double sign = idx.phase ? -1.0 : 1.0;
  Vector v = Vector::Zero(4);
  if (idx.flip == 0) {
    v(0) = s;
    v(3) = sign * s;
  } else {
    v(1) = s;
    v(2) = sign * s;
  }
  return v;
}

BellDiagonalState::BellDiagonalState(std::array<double, 4> coefficients) : p_(coefficients) {
  double sum = 0.0;
  for (double p : p_) {
    if (!(p >= -kTolerance)) throw std::domain_error("Bell-diagonal coefficient is negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kTolerance) throw std::domain_error("Bell-diagonal coefficients do not sum to 1");
}

BellDiagonalState BellDiagonalState::werner(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    throw std::domain_error("Werner fidelity must lie in [0,1], got " + std::to_string(fidelity));
  }
  if (fidelity < 0.25) std::clog << "warning: Werner fidelity " << fidelity << " below 1/4\n";
  const double e = (1.0 - fidelity) / 3.0;
  return BellDiagonalState({fidelity, e, e, e});
}

std::string BellDiagonalState::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "(" << p_[0] << ", " << p_[1] << ", " << p_[2] << ", " << p_[3] << ")";
  return os.str();
}

DensityMatrix to_density(const BellDiagonalState& state) {
  Matrix m = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    const Vector v = bell_state(BellIndex::from_ordinal(k));
    m += state.coefficients()[k] * (v * v.adjoint());
  }
  return DensityMatrix({2, 2}, std::move(m));
}

Matrix in_bell_basis(const DensityMatrix& rho) {
  require_pair(rho);
  const Matrix b = bell_basis();
  return b.adjoint() * rho.data() * b;
}

BellDiagonalState bell_diagonal_part(const DensityMatrix& rho) {
  const Matrix m = in_bell_basis(rho);
  std::array<double, 4> p{};
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    p[k] = std::max(0.0, m(k, k).real());
    sum += p[k];
  }
  for (double& x : p) x /= sum;
  return BellDiagonalState(p);
}

BellDiagonalState depolarize_to_werner(const DensityMatrix& rho) {
  return BellDiagonalState::werner(std::clamp(fidelity_to_reference(rho) / rho.trace(), 0.0, 1.0));
}

double fidelity_to_reference(const DensityMatrix& rho) {
  require_pair(rho);
  const Vector phi = bell_state({0, 0});
  return (phi.adjoint() * rho.data() * phi)(0, 0).real();
}

double bell_off_diagonal(const DensityMatrix& rho) {
  Matrix m = in_bell_basis(rho);
  m.diagonal().setZero();
  return m.cwiseAbs().maxCoeff();
}

}  // namespace epsim
