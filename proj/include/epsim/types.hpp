#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace epsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Local dimensions of the subsystems of a composite state, most significant first.
using Dims = std::vector<int>;

/// Absolute tolerance for normalization, hermiticity and CPTP checks.
inline constexpr double kTolerance = 1e-12;

/// Lower bound accepted for the smallest eigenvalue of a density matrix.
inline constexpr double kPsdTolerance = 1e-10;

/// Largest total Hilbert-space dimension the engine accepts.
inline constexpr Index kMaxDimension = 4096;

}  // namespace epsim
