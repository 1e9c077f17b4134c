#pragma once

#include <optional>
#include <span>
#include <string>

#include "epsim/channels.hpp"
#include "epsim/density.hpp"

namespace epsim {

enum class NoiseFamily { none, dephasing, depolarizing, damping, composite };

std::string to_string(NoiseFamily family);
NoiseFamily noise_family_from_string(const std::string& name);

enum class GateKind { cnot, cswap };

/// Imperfect-operation model: each noisy gate is the ideal unitary followed by
/// a local channel of the model's family on every participating subsystem.
/// Strengths follow the "q near 1 is good" convention (q = 1 is noiseless).
/// Measurements report the right outcome with probability p_meas.
struct NoiseModel {
  NoiseFamily family = NoiseFamily::none;
  double q_cnot = 1.0;
  double q_cswap = 1.0;
  double p_meas = 1.0;

  static NoiseModel noiseless() { return {}; }
  /// Same q for cNOT, cSWAP and measurement.
  static NoiseModel uniform(NoiseFamily family, double q);

  /// Throws std::domain_error if a strength is outside [0,1].
  void validate() const;
  double strength(GateKind kind) const { return kind == GateKind::cnot ? q_cnot : q_cswap; }

  /// Channel hitting one participant of dimension `local_dim`, or nothing when
  /// the family is `none` or q = 1.
  ///
  /// Qubits: dephasing(q), depolarizing(q), damping(γ = 1 − q), and for the
  /// composite family depolarizing ∘ damping ∘ dephasing. For qudits, damping and
  /// dephasing act on each constituent qubit when the dimension is a power of
  /// two and fall back to qudit depolarizing otherwise.
  std::optional<KrausChannel> gate_channel(double q, int local_dim) const;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Ideal U on `targets`, then the model's channel on each target.
DensityMatrix noisy_gate(const DensityMatrix& rho, const Matrix& u, std::span<const int> targets,
                         const NoiseModel& model, GateKind kind);

/// Branch of a measurement whose readout errs with probability 1 − p_meas.
/// The measured subsystem is kept; its post-measurement state is √E ρ √E.
Branch noisy_measure(const DensityMatrix& rho, int target, const MeasurementBasis& basis, int outcome,
                     const NoiseModel& model);

}  // namespace epsim
