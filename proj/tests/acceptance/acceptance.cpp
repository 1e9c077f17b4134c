// Acceptance suite: one PASS/FAIL line per primary criterion.
// Usage: acceptance [path-to-epsim-cli]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epsim/harness/checks.hpp"
#include "epsim/harness/experiments.hpp"
#include "epsim/harness/runner.hpp"
#include "epsim/metrics.hpp"
#include "epsim/protocols.hpp"
#include "oracles.hpp"

using namespace epsim;
using namespace epsim::harness;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Verdict {
  bool passed;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  double limit_seconds;
  std::function<Verdict()> run;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string fixed(double x, int digits = 6) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

ProtocolVariant variant(ProtocolKind base, bool oxford = false, Subroutine sub = Subroutine::p2, int d = 2,
                        KeptSet kept = KeptSet::automatic) {
  ProtocolVariant v;
  v.base = base;
  v.oxford = oxford;
  v.subroutine = sub;
  v.control_dim = d;
  v.kept = kept;
  return v;
}

DensityMatrix pure_label(int ordinal) {
  std::array<double, 4> p{};
  p[ordinal] = 1.0;
  return to_density(BellDiagonalState(p));
}

Trajectory series_trajectory(const ExperimentConfig& c, const SeriesSpec& s, int rounds) {
  DensityMatrix rho = c.initial_at(s, std::nullopt).build();
  if (s.twirl_initial) rho = to_density(depolarize_to_werner(rho));
  return iterate(s.variant, c.noise_at(s, std::nullopt), rho, rounds,
                 {c.twirl_per_round, c.inter_round_hadamard, s.control});
}

const SeriesSpec& series_named(const ExperimentConfig& c, const std::string& label) {
  for (const auto& s : c.series) {
    if (s.label == label) return s;
  }
  throw std::logic_error("series " + label + " missing from " + c.name);
}

// ---------------------------------------------------------------------------

Verdict oracle_equivalence() {
  double worst = 0.0;
  int survivors = 0;
  const ProtocolVariant v = variant(ProtocolKind::single);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      std::array<double, 4> pa{}, pb{};
      pa[a] = pb[b] = 1.0;
      const auto ref = oracle::pauli_frame(oracle::single_program(), {pa, pb});
      try {
        const ProtocolOutcome out = single_selection(pure_label(a), pure_label(b), v, NoiseModel::noiseless());
        ++survivors;
        worst = std::max(worst, std::abs(out.success_probability - ref.success));
        const auto got = bell_diagonal_part(out.output).coefficients();
        for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(got[k] - ref.weights[k] / ref.success));
      } catch (const NoSurvivorError&) {
        worst = std::max(worst, ref.success);
      }
    }
  }
  std::mt19937_64 rng(kSeed);
  for (int t = 0; t < 256; ++t) {
    const auto pa = oracle::random_populations(rng), pb = oracle::random_populations(rng);
    const auto ref = oracle::pauli_frame(oracle::single_program(), {pa, pb});
    const ProtocolOutcome out =
        single_selection(to_density(BellDiagonalState(pa)), to_density(BellDiagonalState(pb)), v, {});
    const auto got = bell_diagonal_part(out.output).coefficients();
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(got[k] - ref.weights[k] / ref.success));
    worst = std::max(worst, std::abs(out.success_probability - ref.success));
  }
  return {worst < 1e-12, "max deviation " + sci(worst) + " over 16 label pairs (" + std::to_string(survivors) +
                             " surviving) and 256 random mixtures"};
}

Verdict bbpssw_recurrence() {
  const Trajectory t = iterate(variant(ProtocolKind::single), NoiseModel::noiseless(),
                               to_density(BellDiagonalState::werner(0.6)), 1, {true, false, ControlSource::identical});
  const auto w = BellDiagonalState::werner(0.6).coefficients();
  const auto brute = oracle::pauli_frame(oracle::single_program(), {w, w});
  const auto closed = oracle::bbpssw_werner(0.6);
  const double f = t.rounds[1].fidelity, p = t.rounds[1].success_probability;
  const double dev = std::max({std::abs(f - brute.weights[0] / brute.success), std::abs(p - brute.success),
                               std::abs(f - closed.fidelity), std::abs(p - closed.success)});
  return {dev < 1e-9, "F' = " + fixed(f, 12) + ", P = " + fixed(p, 12) + ", deviation from oracle " + sci(dev)};
}

Verdict exact_claims() {
  std::mt19937_64 rng(kSeed + 1);
  double dev_a = 0.0, dev_b = 0.0, dev_c = 0.0;
  const DensityMatrix perfect = make_control_state(2, 1.0);
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix rho = to_density(BellDiagonalState(oracle::random_populations(rng)));
    const std::vector<DensityMatrix> pairs{rho, rho};
    const BranchTable table = execute(single_selection_circuit(), pairs,
                                      RoleControl{perfect, RolePermutationTable::swap_pair(), false}, {}, {});
    std::optional<DensityMatrix> zero;
    for (const auto& e : table.entries) {
      if (e.key.all_checks_zero()) zero = zero ? *zero + e.state : e.state;
    }
    const double plain = single_selection(rho, rho, variant(ProtocolKind::single), {}).fidelity();
    dev_a = std::max(dev_a, std::abs(fidelity_to_reference(zero->normalized()) - plain));

    const ProtocolOutcome coherent =
        run_protocol(variant(ProtocolKind::superposed_single, false, Subroutine::p2, 2, KeptSet::coherent_only), pairs,
                     perfect, {});
    const Matrix b = in_bell_basis(coherent.output);
    dev_b = std::max({dev_b, std::abs(b(2, 2)), std::abs(b(3, 3)), bell_off_diagonal(coherent.output)});
  }
  for (double f0 : {0.6, 0.8, 0.95}) {
    const Trajectory t =
        iterate(variant(ProtocolKind::superposed_single, false, Subroutine::p2, 2, KeptSet::coherent_only),
                NoiseModel::noiseless(), to_density(BellDiagonalState::werner(f0)), 2,
                {false, true, ControlSource::perfect});
    dev_c = std::max(dev_c, std::abs(1.0 - t.rounds.back().fidelity));
  }
  const bool ok = dev_a < 1e-12 && dev_b < 1e-12 && dev_c < 1e-10;
  return {ok, "(a) " + sci(dev_a) + " (b) " + sci(dev_b) + " (c) 1-F after two rounds " + sci(dev_c) +
                  " [kept set {(1,1),(+,+)/(-,-)}]"};
}

Verdict surviving_formula() {
  std::mt19937_64 rng(kSeed + 2);
  double dev = 0.0, p_dev = 0.0;
  const ProtocolVariant v = variant(ProtocolKind::superposed_single, false, Subroutine::p2, 2, KeptSet::coherent_only);
  for (int t = 0; t < 100; ++t) {
    const auto p = oracle::random_populations(rng);
    const DensityMatrix rho = to_density(BellDiagonalState(p));
    const std::vector<DensityMatrix> pairs{rho, rho};
    const ProtocolOutcome out = run_protocol(v, pairs, make_control_state(2, 1.0), {});
    const double w00 = p[0] * p[0] + p[2] * p[2], w01 = p[1] * p[1] + p[3] * p[3];
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = w00 / (w00 + w01);
    expected(1, 1) = w01 / (w00 + w01);
    dev = std::max(dev, (in_bell_basis(out.output) - expected).cwiseAbs().maxCoeff());
    p_dev = std::max(p_dev, std::abs(out.success_probability - 0.5 * (w00 + w01)));
  }
  return {dev < 1e-12, "shape deviation " + sci(dev) + " over 100 inputs; branch weight equals (w00+w01)/2 to " +
                           sci(p_dev)};
}

Verdict pauli_diagonality() {
  std::mt19937_64 rng(kSeed + 3);
  std::map<std::string, double> worst;
  std::vector<ProtocolVariant> variants;
  for (auto base : {ProtocolKind::single, ProtocolKind::double_selection, ProtocolKind::triple_selection,
                    ProtocolKind::superposed_single}) {
    for (bool ox : {false, true})
      for (auto sub : {Subroutine::p1, Subroutine::p2}) variants.push_back(variant(base, ox, sub));
  }
  for (int d : {3, 6}) variants.push_back(variant(ProtocolKind::superposed_double, false, Subroutine::p2, d));
  variants.push_back(variant(ProtocolKind::superposed_double, true, Subroutine::p1, 3));
  for (const auto& v : variants) {
    const int rounds = v.control_dim == 6 ? 1 : 3;
    for (int t = 0; t < 3; ++t) {
      double& w = worst[to_string(v.base) + (v.superposed() ? "_D" + std::to_string(v.control_dim) : "")];
      DensityMatrix cur = to_density(BellDiagonalState(oracle::random_populations(rng)));
      for (int r = 0; r < rounds; ++r) {
        const auto control = v.superposed() ? std::optional(control_for_round(v, cur, ControlSource::identical))
                                            : std::nullopt;
        const std::vector<DensityMatrix> pairs(v.data_pairs(), cur);
        cur = run_protocol(v, pairs, control, {}).output;
        w = std::max(w, bell_off_diagonal(cur));
      }
    }
  }
  double overall = 0.0;
  std::ostringstream os;
  for (const auto& [name, value] : worst) {
    overall = std::max(overall, value);
    os << name << "=" << sci(value) << " ";
  }
  return {overall < 1e-12, "max off-diagonal per family: " + os.str()};
}

Verdict ordering_checks() {
  const ExperimentConfig fig7 = *find_builtin("fig7");
  std::map<std::string, std::vector<double>> infid;
  for (const auto& s : fig7.series) {
    const Trajectory t = series_trajectory(fig7, s, 3);
    for (int k = 1; k <= 3; ++k) infid[s.label].push_back(1.0 - t.rounds[k].fidelity);
  }
  bool a = true;
  for (const char* sup : {"superposed_double_D3", "superposed_double_D6"}) {
    for (int k = 0; k < 3; ++k) {
      a = a && infid[sup][k] <= infid["triple"][k] && infid["triple"][k] <= infid["double"][k];
    }
    a = a && infid["triple"][1] - infid[sup][1] > 1e-6;
  }

  const ExperimentConfig fig3b = *find_builtin("fig3b");
  std::map<std::string, double> r3;
  for (const char* label : {"single", "double", "superposed"}) {
    r3[label] = 1.0 - series_trajectory(fig3b, series_named(fig3b, label), 3).rounds[3].fidelity;
  }
  const bool b = r3["superposed"] < r3["double"] && r3["double"] < r3["single"];

  std::ostringstream os;
  os << "(a) " << (a ? "ok" : "violated") << ", round 1-3 infidelity triple " << sci(infid["triple"][0]) << "/"
     << sci(infid["triple"][1]) << "/" << sci(infid["triple"][2]) << ", D3 " << sci(infid["superposed_double_D3"][0])
     << "/" << sci(infid["superposed_double_D3"][1]) << "/" << sci(infid["superposed_double_D3"][2]) << ", D6 "
     << sci(infid["superposed_double_D6"][0]) << "/" << sci(infid["superposed_double_D6"][1]) << "/"
     << sci(infid["superposed_double_D6"][2]) << ", double " << sci(infid["double"][0]) << "/"
     << sci(infid["double"][1]) << "/" << sci(infid["double"][2]) << "; (b) " << (b ? "ok" : "violated")
     << ", round-3 infidelity superposed " << sci(r3["superposed"]) << " double " << sci(r3["double"]) << " single "
     << sci(r3["single"]);
  return {a && b, os.str()};
}

Verdict breakdown_ordering() {
  const ExperimentConfig c = *find_builtin("fig4a");
  const int workers = workers_from_environment();
  const auto& grid = c.sweep.grid;
  std::vector<OperationalRegime> results(c.series.size() * grid.size());
  parallel_for(results.size(), workers, [&](std::size_t k) {
    const SeriesSpec& s = c.series[k / grid.size()];
    const double q = grid[k % grid.size()];
    results[k] = operational_regime_at(s.variant, c.noise_at(s, q), q);
  });
  std::map<std::string, double> breakdown;
  for (std::size_t si = 0; si < c.series.size(); ++si) {
    std::vector<OperationalRegime> row(results.begin() + si * grid.size(), results.begin() + (si + 1) * grid.size());
    breakdown[c.series[si].label] = breakdown_strength(row).value_or(2.0);
  }
  // tolerating more noise means operating down to a smaller q
  const bool ok = breakdown["superposed"] <= breakdown["double"] && breakdown["double"] <= breakdown["single"];
  return {ok, "breakdown q (damping, q_cnot = q_cswap = p_meas, step 0.005): superposed " +
                  fixed(breakdown["superposed"], 3) + ", double " + fixed(breakdown["double"], 3) + ", single " +
                  fixed(breakdown["single"], 3)};
}

Verdict yield_reproduction() {
  const ExperimentConfig c = *find_builtin("fig4b");
  std::map<std::string, YieldResult> y;
  std::map<std::string, double> final_f;
  for (const auto& s : c.series) {
    const Trajectory t = series_trajectory(c, s, c.rounds);
    y[s.label] = yield(t, c.f_target, s.variant.copies_consumed());
    final_f[s.label] = t.rounds.back().fidelity;
  }
  const bool single_never = !y["single"].rounds_to_target;
  const bool others = y["double"].rounds_to_target && y["superposed"].rounds_to_target;
  std::ostringstream os;
  os << "single never reaches: " << (single_never ? "yes" : "no") << "; ";
  for (const char* label : {"single", "double", "superposed"}) {
    os << label << " yield=" << sci(y[label].value) << " rounds="
       << (y[label].rounds_to_target ? std::to_string(*y[label].rounds_to_target) : "never")
       << " F_" << c.rounds << "=" << fixed(final_f[label]) << "; ";
  }
  return {single_never && others, os.str()};
}

Verdict invariants(const std::string& cli) {
  int failed = 0;
  std::string which;
  for (const auto& r : run_checks("")) {
    if (!r.passed) {
      ++failed;
      which += " " + r.name;
    }
  }
  const auto psd = run_checks("channel_trace_psd");
  std::string exit_note = "CLI not given";
  bool exit_ok = true;
  if (!cli.empty()) {
    const std::string cmd = "\"" + cli + "\" check > /dev/null";
    const int status = std::system(cmd.c_str());
    exit_ok = status == 0;
    exit_note = "`check` exit status " + std::to_string(status);
  }
  return {failed == 0 && exit_ok && !psd.empty() && psd[0].passed,
          std::to_string(failed) + " failing checks" + which + "; " + (psd.empty() ? "" : psd[0].detail) + "; " +
              exit_note};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria{
      {"1", "oracle equivalence", 1.0, oracle_equivalence},
      {"2", "BBPSSW recurrence", 1.0, bbpssw_recurrence},
      {"3", "exact claims with perfect control", 5.0, exact_claims},
      {"4", "surviving-state formula", 60.0, surviving_formula},
      {"5", "Pauli diagonality", 300.0, pauli_diagonality},
      {"6", "paper-parameter orderings", 60.0, ordering_checks},
      {"7", "breakdown ordering under damping", 600.0, breakdown_ordering},
      {"8", "yield at q=0.97", 60.0, yield_reproduction},
      {"9", "validity invariants", 120.0, [&cli] { return invariants(cli); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = v.passed && in_time;
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << " (" << fixed(secs, 2) << " s, limit "
              << c.limit_seconds << " s" << (in_time ? "" : ", over time") << "): " << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
