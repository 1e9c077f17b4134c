#include "epsim/density.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "epsim/channels.hpp"

namespace epsim {
namespace {

// Splits the composite index space into (target digits, remaining digits):
// full = rest_offset[r] + target_offset[t].
struct IndexSplit {
  std::vector<Index> target_offset;
  std::vector<Index> rest_offset;
  Dims rest_dims;
};

std::vector<Index> strides_of(const Dims& dims) {
  std::vector<Index> strides(dims.size());
  Index s = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    strides[k] = s;
    s *= dims[k];
  }
  return strides;
}

// Offsets of all digit combinations of `subsystems`, first listed = most significant.
std::vector<Index> offsets_of(const Dims& dims, const std::vector<Index>& strides,
                              std::span<const int> subsystems) {
  std::vector<Index> out{0};
  for (int sub : subsystems) {
    std::vector<Index> next;
    next.reserve(out.size() * dims[sub]);
    for (Index base : out) {
      for (int d = 0; d < dims[sub]; ++d) next.push_back(base + d * strides[sub]);
    }
    out = std::move(next);
  }
  return out;
}

void check_targets(const Dims& dims, std::span<const int> targets) {
  if (targets.empty()) throw std::invalid_argument("empty target list");
  std::vector<int> seen(dims.size(), 0);
  for (int t : targets) {
    if (t < 0 || t >= static_cast<int>(dims.size())) {
      throw std::invalid_argument("target subsystem " + std::to_string(t) + " out of range");
    }
    if (seen[t]++) throw std::invalid_argument("repeated target subsystem");
  }
}

IndexSplit split(const Dims& dims, std::span<const int> targets) {
  check_targets(dims, targets);
  const auto strides = strides_of(dims);
  std::vector<int> rest;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    if (std::find(targets.begin(), targets.end(), k) == targets.end()) rest.push_back(k);
  }
  IndexSplit s;
  s.target_offset = offsets_of(dims, strides, targets);
  s.rest_offset = offsets_of(dims, strides, rest);
  for (int k : rest) s.rest_dims.push_back(dims[k]);
  return s;
}

// Returns op · m where op acts on the target digits of the row index.
Matrix left_apply(const Matrix& op, const Matrix& m, const IndexSplit& s) {
  const Index dt = static_cast<Index>(s.target_offset.size());
  const Index nr = static_cast<Index>(s.rest_offset.size());
  Matrix out(m.rows(), m.cols());
  Matrix gathered(dt, nr);
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < nr; ++r) {
      for (Index t = 0; t < dt; ++t) gathered(t, r) = m(s.rest_offset[r] + s.target_offset[t], c);
    }
    const Matrix res = op * gathered;
    for (Index r = 0; r < nr; ++r) {
      for (Index t = 0; t < dt; ++t) out(s.rest_offset[r] + s.target_offset[t], c) = res(t, r);
    }
  }
  return out;
}

// Generalized permutation: exactly one unit-modulus entry per column.
bool as_phased_permutation(const Matrix& u, std::vector<Index>& image, std::vector<Complex>& phase) {
  const Index n = u.rows();
  image.assign(n, -1);
  phase.assign(n, Complex{});
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      const double a = std::abs(u(r, c));
      if (a < kTolerance) continue;
      if (image[c] != -1 || std::abs(a - 1.0) > kTolerance) return false;
      image[c] = r;
      phase[c] = u(r, c);
    }
    if (image[c] == -1) return false;
  }
  return true;
}

Matrix conjugate_local(const Matrix& data, const Matrix& op, const IndexSplit& s) {
  std::vector<Index> image;
  std::vector<Complex> phase;
  if (as_phased_permutation(op, image, phase)) {
    const Index n = data.rows();
    std::vector<Index> full_image(n);
    std::vector<Complex> full_phase(n);
    for (std::size_t r = 0; r < s.rest_offset.size(); ++r) {
      for (std::size_t t = 0; t < s.target_offset.size(); ++t) {
        const Index from = s.rest_offset[r] + s.target_offset[t];
        full_image[from] = s.rest_offset[r] + s.target_offset[image[t]];
        full_phase[from] = phase[t];
      }
    }
    Matrix out(n, n);
    for (Index c = 0; c < n; ++c) {
      const Index ci = full_image[c];
      const Complex pc = std::conj(full_phase[c]);
      for (Index r = 0; r < n; ++r) out(full_image[r], ci) = full_phase[r] * data(r, c) * pc;
    }
    return out;
  }
  const Matrix half = left_apply(op, data, s);
  return left_apply(op, half.adjoint(), s).adjoint();
}

Index local_dimension(const Dims& dims, std::span<const int> targets) {
  Index d = 1;
  for (int t : targets) d *= dims[t];
  return d;
}

}  // namespace

Index total_dimension(const Dims& dims) {
  Index n = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("subsystem dimension must be positive");
    n *= d;
    if (n > kMaxDimension) {
      throw std::length_error("total dimension exceeds " + std::to_string(kMaxDimension));
    }
  }
  return n;
}

DensityMatrix::DensityMatrix(Dims dims, Matrix data) : dims_(std::move(dims)), data_(std::move(data)) {
  const Index n = total_dimension(dims_);
  if (data_.rows() != n || data_.cols() != n) {
    throw std::invalid_argument("matrix size " + std::to_string(data_.rows()) + "x" +
                                std::to_string(data_.cols()) + " does not match dims product " +
                                std::to_string(n));
  }
}

DensityMatrix DensityMatrix::from_pure(Dims dims, const Vector& psi) {
  const Index n = total_dimension(dims);
  if (psi.size() != n) throw std::invalid_argument("state vector size does not match dims");
  return DensityMatrix(std::move(dims), psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  const Index n = total_dimension(dims);
  return DensityMatrix(std::move(dims), Matrix::Identity(n, n) / static_cast<double>(n));
}

double DensityMatrix::trace() const { return data_.trace().real(); }

DensityMatrix DensityMatrix::normalized() const {
  const double t = trace();
  if (!(t > 0.0)) throw std::domain_error("cannot normalize a zero-trace branch");
  return scaled(1.0 / t);
}

DensityMatrix DensityMatrix::scaled(double factor) const { return DensityMatrix(dims_, data_ * factor); }

double DensityMatrix::hermiticity_error() const { return (data_ - data_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid_state() const {
  return hermiticity_error() <= kTolerance && std::abs(trace() - 1.0) <= kTolerance &&
         min_eigenvalue() >= -kPsdTolerance;
}

DensityMatrix DensityMatrix::operator+(const DensityMatrix& other) const {
  if (dims_ != other.dims_) throw std::invalid_argument("adding states with different dims");
  return DensityMatrix(dims_, data_ + other.data_);
}

DensityMatrix tensor(std::span<const DensityMatrix> states) {
  if (states.empty()) throw std::invalid_argument("tensor of an empty list");
  Dims dims;
  for (const auto& s : states) dims.insert(dims.end(), s.dims().begin(), s.dims().end());
  total_dimension(dims);  // overflow guard before allocating
  Matrix acc = states[0].data();
  for (std::size_t k = 1; k < states.size(); ++k) {
    const Matrix& b = states[k].data();
    Matrix next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Index i = 0; i < acc.rows(); ++i) {
      for (Index j = 0; j < acc.cols(); ++j) {
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
      }
    }
    acc = std::move(next);
  }
  return DensityMatrix(std::move(dims), std::move(acc));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const DensityMatrix both[] = {a, b};
  return tensor(both);
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u, std::span<const int> targets) {
  check_targets(rho.dims(), targets);
  const Index d = local_dimension(rho.dims(), targets);
  if (u.rows() != d || u.cols() != d) {
    throw std::invalid_argument("unitary dimension " + std::to_string(u.rows()) +
                                " does not match target dimension " + std::to_string(d));
  }
  if ((u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kTolerance) {
    throw std::invalid_argument("operator is not unitary");
  }
  return apply_operator(rho, u, targets);
}

DensityMatrix apply_operator(const DensityMatrix& rho, const Matrix& k, std::span<const int> targets) {
  const auto s = split(rho.dims(), targets);
  const Index d = static_cast<Index>(s.target_offset.size());
  if (k.rows() != d || k.cols() != d) throw std::invalid_argument("operator dimension mismatch");
  return DensityMatrix(rho.dims(), conjugate_local(rho.data(), k, s));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel, int target) {
  const int targets[] = {target};
  const auto s = split(rho.dims(), targets);
  const Index d = static_cast<Index>(s.target_offset.size());
  if (channel.dim() != d) {
    throw std::invalid_argument("channel dimension " + std::to_string(channel.dim()) +
                                " does not match subsystem dimension " + std::to_string(d));
  }
  // Every (rest-row, rest-col) block is a d×d operator mapped by the Liouville matrix.
  const Index nr = static_cast<Index>(s.rest_offset.size());
  const Matrix& data = rho.data();
  Matrix blocks(d * d, nr * nr);
  for (Index ri = 0; ri < nr; ++ri) {
    for (Index rj = 0; rj < nr; ++rj) {
      const Index col = ri * nr + rj;
      for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) {
          blocks(a * d + b, col) = data(s.rest_offset[ri] + s.target_offset[a],
                                        s.rest_offset[rj] + s.target_offset[b]);
        }
      }
    }
  }
  const Matrix mapped = channel.superoperator() * blocks;
  Matrix out(data.rows(), data.cols());
  for (Index ri = 0; ri < nr; ++ri) {
    for (Index rj = 0; rj < nr; ++rj) {
      const Index col = ri * nr + rj;
      for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) {
          out(s.rest_offset[ri] + s.target_offset[a], s.rest_offset[rj] + s.target_offset[b]) =
              mapped(a * d + b, col);
        }
      }
    }
  }
  return DensityMatrix(rho.dims(), std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  check_targets(rho.dims(), keep);
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  // Traced subsystems play the role of "targets" in the split.
  std::vector<int> traced;
  for (int k = 0; k < rho.num_subsystems(); ++k) {
    if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);
  }
  if (traced.empty()) return rho;
  const auto s = split(rho.dims(), traced);
  const Index nr = static_cast<Index>(s.rest_offset.size());
  Matrix out = Matrix::Zero(nr, nr);
  for (Index i = 0; i < nr; ++i) {
    for (Index j = 0; j < nr; ++j) {
      Complex acc{};
      for (Index t : s.target_offset) acc += rho.data()(s.rest_offset[i] + t, s.rest_offset[j] + t);
      out(i, j) = acc;
    }
  }
  return DensityMatrix(s.rest_dims, std::move(out));
}

DensityMatrix measure_and_discard(const DensityMatrix& rho, int target, const Matrix& effect) {
  const int targets[] = {target};
  const auto s = split(rho.dims(), targets);
  const Index d = static_cast<Index>(s.target_offset.size());
  if (effect.rows() != d || effect.cols() != d) throw std::invalid_argument("effect dimension mismatch");
  const Index nr = static_cast<Index>(s.rest_offset.size());
  Matrix out(nr, nr);
  for (Index i = 0; i < nr; ++i) {
    for (Index j = 0; j < nr; ++j) {
      Complex acc{};
      for (Index a = 0; a < d; ++a) {
        for (Index b = 0; b < d; ++b) {
          const Complex e = effect(b, a);
          if (e == Complex{}) continue;
          acc += e * rho.data()(s.rest_offset[i] + s.target_offset[a], s.rest_offset[j] + s.target_offset[b]);
        }
      }
      out(i, j) = acc;
    }
  }
  return DensityMatrix(s.rest_dims, std::move(out));
}

Branch measure(const DensityMatrix& rho, int target, const MeasurementBasis& basis, int outcome) {
  if (outcome < 0 || outcome >= basis.num_outcomes()) throw std::invalid_argument("outcome index out of range");
  const int targets[] = {target};
  DensityMatrix branch = apply_operator(rho, basis.projector(outcome), targets);
  const double p = branch.trace();
  return {std::move(branch), p};
}

}  // namespace epsim
