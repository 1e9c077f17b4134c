#include "epsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epsim {
namespace {

constexpr double kMinSuccess = 1e-15;
constexpr double kFixedPointTolerance = 1e-10;
constexpr int kFixedPointRounds = 200;
constexpr double kGridStep = 1e-3;
constexpr double kBisectionResolution = 1e-4;
constexpr double kGainThreshold = 1e-12;

DensityMatrix werner_density(double f) { return to_density(BellDiagonalState::werner(f)); }

ProtocolOutcome one_round(const ProtocolVariant& v, const NoiseModel& nm, const DensityMatrix& current,
                          ControlSource source) {
  std::vector<DensityMatrix> pairs(v.data_pairs(), current);
  std::optional<DensityMatrix> control;
  if (v.superposed()) control = control_for_round(v, current, source);
  return run_protocol(v, pairs, control, nm);
}

RoundRecord record(int round, const DensityMatrix& state) {
  RoundRecord r;
  r.round = round;
  r.bell = bell_diagonal_part(state).coefficients();
  r.fidelity = fidelity_to_reference(state);
  return r;
}

}  // namespace

std::string to_string(ControlSource source) { return source == ControlSource::perfect ? "perfect" : "identical"; }

ControlSource control_source_from_string(const std::string& name) {
  if (name == "perfect") return ControlSource::perfect;
  if (name == "identical") return ControlSource::identical;
  throw std::invalid_argument("unknown control source '" + name + "' (expected perfect|identical)");
}

DensityMatrix control_for_round(const ProtocolVariant& v, const DensityMatrix& current, ControlSource source) {
  if (source == ControlSource::perfect) return make_control_state(v.control_dim, 1.0);
  if (v.control_dim == 2) return current;
  return make_control_state(v.control_dim, std::clamp(fidelity_to_reference(current), 0.0, 1.0));
}

Trajectory iterate(const ProtocolVariant& v, const NoiseModel& nm, const DensityMatrix& initial, int n_rounds,
                   const IterationPolicy& policy) {
  if (n_rounds < 1) throw std::invalid_argument("n_rounds must be at least 1");
  v.validate();
  nm.validate();
  Trajectory traj;
  traj.rounds.push_back(record(0, initial));
  DensityMatrix current = initial;
  double product = 1.0;
  const double with_control = v.copies_consumed();
  const double without_control = v.data_pairs();
  for (int k = 1; k <= n_rounds; ++k) {
    ProtocolOutcome out = [&]() -> ProtocolOutcome {
      try {
        return one_round(v, nm, current, policy.control);
      } catch (const NoSurvivorError& e) {
        return {current, 0.0, with_control, e.what(), Subroutine::p2};
      }
    }();
    if (out.success_probability < kMinSuccess) {
      traj.aborted = true;
      traj.abort_reason = "success probability underflow at round " + std::to_string(k);
      break;
    }
    current = out.output;
    if (policy.twirl) current = to_density(depolarize_to_werner(current));
    if (policy.inter_round_hadamard) current = inter_round_hadamard(current);
    product *= out.success_probability;
    RoundRecord r = record(k, current);
    r.success_probability = out.success_probability;
    r.yield_with_control = product / std::pow(with_control, k);
    r.yield_without_control = product / std::pow(without_control, k);
    r.subroutine = to_string(out.subroutine_used);
    traj.rounds.push_back(std::move(r));
  }
  return traj;
}

YieldResult yield(const Trajectory& traj, double f_target, double copies_per_round) {
  if (copies_per_round <= 0.0) throw std::invalid_argument("copies_per_round must be positive");
  double product = 1.0;
  for (const auto& r : traj.rounds) {
    if (r.round > 0) product *= r.success_probability;
    if (r.fidelity >= f_target) return {product / std::pow(copies_per_round, r.round), r.round};
  }
  return {0.0, std::nullopt};
}

FixedPoint fixed_point(const ProtocolVariant& v, const NoiseModel& nm, double f0, const IterationPolicy& policy) {
  FixedPoint fp;
  DensityMatrix current = werner_density(f0);
  double f = f0;
  std::vector<double> deltas;
  for (int k = 1; k <= kFixedPointRounds; ++k) {
    std::optional<ProtocolOutcome> out;
    try {
      out = one_round(v, nm, current, policy.control);
    } catch (const NoSurvivorError&) {
      fp.fidelity = f;
      fp.rounds = k - 1;
      fp.note = "no surviving branch";
      return fp;
    }
    if (out->success_probability < kMinSuccess) {
      fp.fidelity = f;
      fp.rounds = k - 1;
      fp.note = "success probability underflow";
      return fp;
    }
    current = out->output;
    if (policy.twirl) current = to_density(depolarize_to_werner(current));
    if (policy.inter_round_hadamard) current = inter_round_hadamard(current);
    const double next = fidelity_to_reference(current);
    deltas.push_back(next - f);
    f = next;
    fp.rounds = k;
    if (std::abs(deltas.back()) < kFixedPointTolerance) {
      fp.fidelity = f;
      fp.converged = true;
      return fp;
    }
  }
  fp.fidelity = f;
  const std::size_t window = std::min<std::size_t>(10, deltas.size());
  int sign_changes = 0;
  for (std::size_t k = deltas.size() - window + 1; k < deltas.size(); ++k) {
    if ((deltas[k] > 0) != (deltas[k - 1] > 0)) ++sign_changes;
  }
  fp.oscillating = sign_changes >= static_cast<int>(window) - 2;
  fp.note = fp.oscillating ? "oscillating, not converged" : "not converged within 200 rounds";
  return fp;
}

double werner_gain(const ProtocolVariant& v, const NoiseModel& nm, double f0) {
  try {
    const ProtocolOutcome out = one_round(v, nm, werner_density(f0), ControlSource::identical);
    if (out.success_probability < kMinSuccess) return -1.0;
    return out.fidelity() - f0;
  } catch (const NoSurvivorError&) {
    return -1.0;
  }
}

OperationalRegime operational_regime_at(const ProtocolVariant& v, const NoiseModel& nm, double q) {
  OperationalRegime reg;
  reg.q = q;
  const int steps = static_cast<int>(std::lround(0.75 / kGridStep));
  double below = 0.5;
  for (int k = 0; k <= steps; ++k) {
    const double f0 = 0.25 + k * kGridStep;
    if (f0 <= 0.5) continue;
    if (werner_gain(v, nm, f0) > kGainThreshold) {
      double lo = below, hi = f0;
      while (hi - lo > kBisectionResolution) {
        const double mid = 0.5 * (lo + hi);
        (werner_gain(v, nm, mid) > kGainThreshold ? hi : lo) = mid;
      }
      reg.operates = true;
      reg.f_min = hi;
      break;
    }
    below = f0;
  }
  if (!reg.operates) return reg;
  reg.limit = fixed_point(v, nm, std::min(1.0, reg.f_min + kGridStep));
  reg.f_max = reg.limit.fidelity;
  return reg;
}

std::vector<OperationalRegime> operational_regime(const ProtocolVariant& v,
                                                  const std::function<NoiseModel(double)>& noise_at,
                                                  const std::vector<double>& q_grid) {
  std::vector<OperationalRegime> out;
  out.reserve(q_grid.size());
  for (double q : q_grid) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("q grid value outside [0,1]");
    out.push_back(operational_regime_at(v, noise_at(q), q));
  }
  return out;
}

std::vector<OperationalRegime> operational_regime(const ProtocolVariant& v, NoiseFamily family,
                                                  const std::vector<double>& q_grid) {
  return operational_regime(v, [family](double q) { return NoiseModel::uniform(family, q); }, q_grid);
}

std::optional<double> breakdown_strength(const std::vector<OperationalRegime>& regimes) {
  std::vector<OperationalRegime> sorted = regimes;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.q > b.q; });
  std::optional<double> last;
  for (const auto& r : sorted) {
    if (!r.operates) break;
    last = r.q;
  }
  return last;
}

std::vector<std::array<double, 4>> pauli_trajectory(const ProtocolVariant& v, const BellDiagonalState& initial,
                                                    int n_rounds, const IterationPolicy& policy) {
  const Trajectory traj = iterate(v, NoiseModel::noiseless(), to_density(initial), n_rounds, policy);
  std::vector<std::array<double, 4>> out;
  for (const auto& r : traj.rounds) out.push_back(r.bell);
  return out;
}

}  // namespace epsim
