#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "epsim/bell.hpp"
#include "epsim/protocols.hpp"

namespace epsim {

/// Where the control pair of a superposed round comes from.
enum class ControlSource {
  perfect,    // ideal maximally entangled control
  identical,  // copy of the current pair (D = 2) or Werner-like control at the current fidelity (D > 2)
};

std::string to_string(ControlSource source);
ControlSource control_source_from_string(const std::string& name);

struct IterationPolicy {
  bool twirl = false;                 // project the output onto the Werner family after each round
  bool inter_round_hadamard = false;  // H⊗H on the output after each round
  ControlSource control = ControlSource::identical;
};

struct RoundRecord {
  int round = 0;
  std::array<double, 4> bell{};  // Bell-diagonal part of the round's output
  double fidelity = 0.0;
  double success_probability = 1.0;
  double yield_with_control = 1.0;
  double yield_without_control = 1.0;
  std::string subroutine;  // empty for round 0
};

struct Trajectory {
  std::vector<RoundRecord> rounds;  // rounds[0] is the input
  bool aborted = false;
  std::string abort_reason;
};

/// Runs `n_rounds` rounds, feeding each round i.i.d. copies of the previous output.
/// Aborts (and records why) when the success probability falls below 1e-15.
Trajectory iterate(const ProtocolVariant& v, const NoiseModel& nm, const DensityMatrix& initial, int n_rounds,
                   const IterationPolicy& policy);

/// Control pair used by a superposed round on `current`.
DensityMatrix control_for_round(const ProtocolVariant& v, const DensityMatrix& current, ControlSource source);

struct YieldResult {
  double value = 0.0;
  std::optional<int> rounds_to_target;  // empty when the target is never reached
};

/// Π_{i≤n*} P_i / copies_per_round^{n*}, n* the first round with F ≥ target.
YieldResult yield(const Trajectory& traj, double f_target, double copies_per_round);

struct FixedPoint {
  double fidelity = 0.0;
  int rounds = 0;
  bool converged = false;
  bool oscillating = false;
  std::string note;
};

/// Iterates from a Werner input until |ΔF| < 1e-10 or 200 rounds.
FixedPoint fixed_point(const ProtocolVariant& v, const NoiseModel& nm, double f0,
                       const IterationPolicy& policy = {true, false, ControlSource::identical});

struct OperationalRegime {
  double q = 1.0;
  bool operates = false;
  double f_min = 0.0;
  double f_max = 0.0;
  FixedPoint limit;
};

/// F_min is the smallest Werner F0 on a 1e-3 grid from 1/4, refined to 1e-4 by
/// bisection, for which one twirled round strictly gains fidelity. Only
/// entangled inputs (F0 > 1/2) count. F_max is the fixed point reached from
/// F_min + 1e-3.
OperationalRegime operational_regime_at(const ProtocolVariant& v, const NoiseModel& nm, double q);

/// Regime at every q of the grid, with the noise model built by `noise_at(q)`.
std::vector<OperationalRegime> operational_regime(const ProtocolVariant& v,
                                                  const std::function<NoiseModel(double)>& noise_at,
                                                  const std::vector<double>& q_grid);
/// Same, with gates and readout all at strength q.
std::vector<OperationalRegime> operational_regime(const ProtocolVariant& v, NoiseFamily family,
                                                  const std::vector<double>& q_grid);

/// One-round fidelity gain on a Werner input.
double werner_gain(const ProtocolVariant& v, const NoiseModel& nm, double f0);

/// Smallest q on the grid at which the protocol still operates, scanning from
/// the noiseless end; empty if it never operates.
std::optional<double> breakdown_strength(const std::vector<OperationalRegime>& regimes);

/// Bell-diagonal coefficients per round under noiseless operations.
std::vector<std::array<double, 4>> pauli_trajectory(const ProtocolVariant& v, const BellDiagonalState& initial,
                                                    int n_rounds, const IterationPolicy& policy = {});

}  // namespace epsim
