#include "epsim/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epsim {
namespace {

void require_probability(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1], got " + std::to_string(value));
  }
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

}  // namespace

double cptp_deviation(std::span<const Matrix> ops) {
  if (ops.empty()) return 1.0;
  const Index d = ops.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& k : ops) {
    if (k.rows() != d || k.cols() != d) return 1.0;
    sum += k.adjoint() * k;
  }
  return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

KrausChannel::KrausChannel(std::vector<Matrix> ops, std::string label, double strength)
    : ops_(std::move(ops)), label_(std::move(label)), strength_(strength) {
  if (ops_.empty()) throw std::invalid_argument("channel '" + label_ + "' has no Kraus operators");
  const double dev = cptp_deviation(ops_);
  if (dev > kTolerance) {
    throw std::invalid_argument("channel '" + label_ + "' is not trace preserving (deviation " +
                                std::to_string(dev) + ")");
  }
  // vec(K B K†)[a*d+b] = Σ_{a',b'} K[a,a'] conj(K[b,b']) B[a',b']
  const Index d = ops_.front().rows();
  super_ = Matrix::Zero(d * d, d * d);
  for (const auto& k : ops_) super_ += kron(k, k.conjugate());
}

namespace channels {

KrausChannel identity(int dim) { return KrausChannel({Matrix::Identity(dim, dim)}, "identity", 1.0); }

KrausChannel dephasing(double q) {
  require_probability(q, "dephasing strength");
  return KrausChannel({std::sqrt(q) * Matrix::Identity(2, 2), std::sqrt(1.0 - q) * pauli_z()}, "dephasing", q);
}

KrausChannel depolarizing(double q) {
  require_probability(q, "depolarizing strength");
  const double w = (1.0 - q) / 4.0;
  return KrausChannel({std::sqrt(q + w) * Matrix::Identity(2, 2), std::sqrt(w) * pauli_z(),
                       std::sqrt(w) * pauli_x(), std::sqrt(w) * pauli_y()},
                      "depolarizing", q);
}

KrausChannel qudit_depolarizing(double q, int dim) {
  require_probability(q, "depolarizing strength");
  if (dim < 2) throw std::invalid_argument("qudit dimension must be at least 2");
  const double d2 = static_cast<double>(dim) * dim;
  Matrix shift = Matrix::Zero(dim, dim);
  Matrix clock = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    shift((k + 1) % dim, k) = 1.0;
    clock(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / dim);
  }
  std::vector<Matrix> ops;
  Matrix xa = Matrix::Identity(dim, dim);
  for (int a = 0; a < dim; ++a) {
    Matrix weyl = xa;
    for (int b = 0; b < dim; ++b) {
      const double w = (a == 0 && b == 0) ? q + (1.0 - q) / d2 : (1.0 - q) / d2;
      ops.push_back(std::sqrt(w) * weyl);
      weyl = weyl * clock;
    }
    xa = shift * xa;
  }
  return KrausChannel(std::move(ops), "depolarizing", q);
}

KrausChannel amplitude_damping(double gamma) {
  require_probability(gamma, "damping probability");
  Matrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return KrausChannel({k0, k1}, "damping", gamma);
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.dim() != second.dim()) throw std::invalid_argument("composing channels of different dimension");
  std::vector<Matrix> ops;
  for (const auto& b : second.ops()) {
    for (const auto& a : first.ops()) ops.push_back(b * a);
  }
  return KrausChannel(std::move(ops), second.label() + "∘" + first.label(), second.strength());
}

KrausChannel tensor(const KrausChannel& first, const KrausChannel& second) {
  std::vector<Matrix> ops;
  for (const auto& a : first.ops()) {
    for (const auto& b : second.ops()) ops.push_back(kron(a, b));
  }
  return KrausChannel(std::move(ops), first.label() + "⊗" + second.label(), first.strength());
}

}  // namespace channels

MeasurementBasis::MeasurementBasis(BasisKind kind, std::vector<Vector> vectors)
    : kind_(kind), vectors_(std::move(vectors)) {}

MeasurementBasis MeasurementBasis::z(int dim) {
  std::vector<Vector> v;
  for (int k = 0; k < dim; ++k) v.push_back(Vector::Unit(dim, k));
  return MeasurementBasis(BasisKind::z, std::move(v));
}

MeasurementBasis MeasurementBasis::x() {
  const double s = 1.0 / std::sqrt(2.0);
  Vector plus(2), minus(2);
  plus << s, s;
  minus << s, -s;
  return MeasurementBasis(BasisKind::x, {plus, minus});
}

MeasurementBasis MeasurementBasis::fourier(int dim) {
  if (dim < 2) throw std::invalid_argument("Fourier basis needs dimension >= 2");
  std::vector<Vector> v;
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int m = 0; m < dim; ++m) {
    Vector f(dim);
    for (int k = 0; k < dim; ++k) {
      // exact ±1 for D = 2 keeps projectors free of rounding noise
      const int phase = (m * k) % dim;
      f(k) = (2 * phase == dim) ? Complex(-norm, 0.0)
             : phase == 0      ? Complex(norm, 0.0)
                               : std::polar(norm, 2.0 * std::numbers::pi * phase / dim);
    }
    v.push_back(std::move(f));
  }
  return MeasurementBasis(BasisKind::fourier, std::move(v));
}

Matrix MeasurementBasis::projector(int outcome) const {
  const Vector& v = vector(outcome);
  return v * v.adjoint();
}

Matrix MeasurementBasis::effect(int outcome, double p_correct) const {
  require_probability(p_correct, "measurement reliability");
  const Matrix proj = projector(outcome);
  if (p_correct == 1.0) return proj;
  const int d = dim();
  const Matrix rest = Matrix::Identity(d, d) - proj;
  return p_correct * proj + (1.0 - p_correct) / (d - 1) * rest;
}

}  // namespace epsim
