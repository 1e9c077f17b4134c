#include "epsim/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace epsim {
namespace {

bool is_power_of_two(int d) { return d >= 2 && (d & (d - 1)) == 0; }

// Applies the same qubit channel to every constituent qubit of a 2^k-dim subsystem.
KrausChannel per_qubit(const KrausChannel& qubit_channel, int local_dim) {
  KrausChannel acc = qubit_channel;
  for (int d = 4; d <= local_dim; d *= 2) acc = channels::tensor(acc, qubit_channel);
  return acc;
}

KrausChannel qubit_channel(NoiseFamily family, double q) {
  switch (family) {
    case NoiseFamily::dephasing:
      return channels::dephasing(q);
    case NoiseFamily::depolarizing:
      return channels::depolarizing(q);
    case NoiseFamily::damping:
      return channels::amplitude_damping(1.0 - q);
    case NoiseFamily::composite:
      return channels::compose(channels::compose(channels::dephasing(q), channels::amplitude_damping(1.0 - q)),
                               channels::depolarizing(q));
    case NoiseFamily::none:
      break;
  }
  return channels::identity(2);
}

}  // namespace

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::none:
      return "none";
    case NoiseFamily::dephasing:
      return "deph";
    case NoiseFamily::depolarizing:
      return "depo";
    case NoiseFamily::damping:
      return "damp";
    case NoiseFamily::composite:
      return "composite";
  }
  return "none";
}

NoiseFamily noise_family_from_string(const std::string& name) {
  if (name == "none") return NoiseFamily::none;
  if (name == "deph") return NoiseFamily::dephasing;
  if (name == "depo") return NoiseFamily::depolarizing;
  if (name == "damp") return NoiseFamily::damping;
  if (name == "composite") return NoiseFamily::composite;
  throw std::invalid_argument("unknown noise family '" + name + "' (expected none|deph|depo|damp|composite)");
}

NoiseModel NoiseModel::uniform(NoiseFamily family, double q) {
  NoiseModel m{family, q, q, q};
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  for (double v : {q_cnot, q_cswap, p_meas}) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("noise strength outside [0,1]: " + std::to_string(v));
  }
}

std::optional<KrausChannel> NoiseModel::gate_channel(double q, int local_dim) const {
  if (family == NoiseFamily::none || q == 1.0) return std::nullopt;
  if (local_dim == 2) return qubit_channel(family, q);
  if (family == NoiseFamily::depolarizing || !is_power_of_two(local_dim)) {
    return channels::qudit_depolarizing(q, local_dim);
  }
  return per_qubit(qubit_channel(family, q), local_dim);
}

DensityMatrix noisy_gate(const DensityMatrix& rho, const Matrix& u, std::span<const int> targets,
                         const NoiseModel& model, GateKind kind) {
  DensityMatrix out = apply_unitary(rho, u, targets);
  const double q = model.strength(kind);
  for (int t : targets) {
    if (auto ch = model.gate_channel(q, out.dims()[t])) out = apply_channel(out, *ch, t);
  }
  return out;
}

Branch noisy_measure(const DensityMatrix& rho, int target, const MeasurementBasis& basis, int outcome,
                     const NoiseModel& model) {
  if (model.p_meas == 1.0) return measure(rho, target, basis, outcome);
  const Matrix effect = basis.effect(outcome, model.p_meas);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(effect);
  const Matrix root = solver.eigenvectors() * solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                      solver.eigenvectors().adjoint();
  const int targets[] = {target};
  DensityMatrix branch = apply_operator(rho, root, targets);
  const double p = branch.trace();
  return {std::move(branch), p};
}

}  // namespace epsim
