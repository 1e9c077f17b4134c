#include "epsim/protocols.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "epsim/bell.hpp"

namespace epsim {
namespace {

constexpr double kNegligibleWeight = 1e-15;

template <typename E>
E from_table(const std::string& name, std::initializer_list<std::pair<const char*, E>> table, const char* what) {
  std::string valid;
  for (const auto& [key, value] : table) {
    if (name == key) return value;
    valid += (valid.empty() ? "" : "|") + std::string(key);
  }
  throw std::invalid_argument(std::string("unknown ") + what + " '" + name + "' (expected " + valid + ")");
}

ProtocolOutcome run_once(const ProtocolVariant& v, std::span<const DensityMatrix> pairs,
                         const std::optional<DensityMatrix>& control, const NoiseModel& nm, bool hadamard) {
  std::optional<RoleControl> rc;
  if (v.superposed()) rc = RoleControl{*control, role_table(v), v.second_cswap};
  const BranchTable table = execute(circuit_for(v.base), pairs, rc, Dressing{v.oxford, hadamard}, nm);
  KeptBranches kept = select_branches(table, v.effective_kept());
  const double p = kept.state.trace();
  if (!(p > kNegligibleWeight)) throw NoSurvivorError("no kept branch carries weight for " + v.describe());
  return {kept.state.normalized(), p, v.copies_consumed(), std::move(kept.description),
          hadamard ? Subroutine::p1 : Subroutine::p2};
}

}  // namespace

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::single:
      return "single";
    case ProtocolKind::double_selection:
      return "double";
    case ProtocolKind::triple_selection:
      return "triple";
    case ProtocolKind::superposed_single:
      return "superposed_single";
    case ProtocolKind::superposed_double:
      return "superposed_double";
  }
  return "single";
}

ProtocolKind protocol_kind_from_string(const std::string& name) {
  return from_table<ProtocolKind>(name,
                                  {{"single", ProtocolKind::single},
                                   {"double", ProtocolKind::double_selection},
                                   {"triple", ProtocolKind::triple_selection},
                                   {"superposed_single", ProtocolKind::superposed_single},
                                   {"superposed_double", ProtocolKind::superposed_double}},
                                  "protocol");
}

std::string to_string(Subroutine sub) {
  switch (sub) {
    case Subroutine::p1:
      return "P1";
    case Subroutine::p2:
      return "P2";
    case Subroutine::adaptive:
      return "adaptive";
  }
  return "P2";
}

Subroutine subroutine_from_string(const std::string& name) {
  return from_table<Subroutine>(
      name, {{"P1", Subroutine::p1}, {"P2", Subroutine::p2}, {"adaptive", Subroutine::adaptive}}, "subroutine");
}

std::string to_string(KeptSet kept) {
  switch (kept) {
    case KeptSet::automatic:
      return "automatic";
    case KeptSet::all:
      return "all";
    case KeptSet::standard:
      return "standard";
    case KeptSet::coherent_only:
      return "coherent_only";
    case KeptSet::favorable:
      return "favorable";
  }
  return "automatic";
}

KeptSet kept_set_from_string(const std::string& name) {
  return from_table<KeptSet>(name,
                             {{"automatic", KeptSet::automatic},
                              {"all", KeptSet::all},
                              {"standard", KeptSet::standard},
                              {"coherent_only", KeptSet::coherent_only},
                              {"favorable", KeptSet::favorable}},
                             "kept set");
}

void ProtocolVariant::validate() const {
  if (base == ProtocolKind::superposed_single && control_dim != 2) {
    throw std::invalid_argument("superposed_single needs control_dim 2");
  }
  if (base == ProtocolKind::superposed_double && control_dim != 3 && control_dim != 6) {
    throw std::invalid_argument("superposed_double needs control_dim 3 or 6");
  }
  if (!superposed() && second_cswap) throw std::invalid_argument("second_cswap needs a superposed protocol");
  if (!superposed() && kept != KeptSet::automatic && kept != KeptSet::all) {
    throw std::invalid_argument("kept set " + to_string(kept) + " needs a superposed protocol");
  }
}

int ProtocolVariant::data_pairs() const noexcept {
  switch (base) {
    case ProtocolKind::single:
    case ProtocolKind::superposed_single:
      return 2;
    case ProtocolKind::double_selection:
    case ProtocolKind::superposed_double:
      return 3;
    case ProtocolKind::triple_selection:
      return 4;
  }
  return 2;
}

double ProtocolVariant::copies_consumed() const {
  const double pairs = data_pairs();
  return superposed() ? pairs + std::log2(static_cast<double>(control_dim)) : pairs;
}

KeptSet ProtocolVariant::effective_kept() const noexcept {
  if (kept != KeptSet::automatic) return kept;
  switch (base) {
    case ProtocolKind::superposed_single:
      return KeptSet::standard;
    case ProtocolKind::superposed_double:
      return KeptSet::favorable;
    default:
      return KeptSet::all;
  }
}

std::string ProtocolVariant::describe() const {
  std::ostringstream os;
  os << to_string(base);
  if (superposed()) os << "[D=" << control_dim << "]";
  if (oxford) os << "+oxford";
  os << "/" << to_string(subroutine);
  if (second_cswap) os << "+second_cswap";
  if (kept != KeptSet::automatic) os << "/kept=" << to_string(kept);
  return os.str();
}

double ProtocolOutcome::fidelity() const { return fidelity_to_reference(output); }

const SelectionCircuit& circuit_for(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::single:
    case ProtocolKind::superposed_single:
      return single_selection_circuit();
    case ProtocolKind::double_selection:
    case ProtocolKind::superposed_double:
      return double_selection_circuit();
    case ProtocolKind::triple_selection:
      return triple_selection_circuit();
  }
  return single_selection_circuit();
}

RolePermutationTable role_table(const ProtocolVariant& v) {
  if (v.base == ProtocolKind::superposed_single) return RolePermutationTable::swap_pair();
  if (v.base == ProtocolKind::superposed_double) {
    return v.control_dim == 3 ? RolePermutationTable::cyclic(3) : RolePermutationTable::all_permutations(3);
  }
  throw std::invalid_argument("role table requested for " + to_string(v.base));
}

KeptBranches select_branches(const BranchTable& table, KeptSet kept) {
  const int d = table.control_dim;
  std::optional<DensityMatrix> acc;
  std::vector<std::string> names;
  auto take = [&](const BranchEntry& e) {
    acc = acc ? *acc + e.state : e.state;
    names.push_back(e.key.to_string());
  };

  if (kept == KeptSet::favorable && d > 0) {
    std::map<std::vector<int>, std::vector<const BranchEntry*>> by_pattern;
    for (const auto& e : table.entries) by_pattern[e.key.checks].push_back(&e);
    for (const auto& [pattern, entries] : by_pattern) {
      std::optional<DensityMatrix> sum;
      for (const auto* e : entries) sum = sum ? *sum + e->state : e->state;
      const double total = sum->trace();
      if (total <= kNegligibleWeight) continue;
      const double average = fidelity_to_reference(*sum) / total;
      for (const auto* e : entries) {
        const double w = e->weight();
        if (w > kNegligibleWeight && fidelity_to_reference(e->state) / w >= average - kTolerance) take(*e);
      }
    }
  } else {
    for (const auto& e : table.entries) {
      const bool coherent = e.key.control_parity(d) == 0;
      bool keep = true;
      switch (kept) {
        case KeptSet::standard:
          keep = d == 0 || e.key.all_checks_zero() || coherent;
          break;
        case KeptSet::coherent_only:
          keep = d == 0 || (coherent && !e.key.all_checks_zero());
          break;
        default:
          break;
      }
      if (keep) take(e);
    }
  }
  if (!acc) {
    const auto& any = table.entries.front().state;
    acc = any.scaled(0.0);
  }
  std::ostringstream os;
  os << to_string(kept) << ":";
  for (std::size_t k = 0; k < names.size(); ++k) os << (k ? ";" : "") << names[k];
  return {std::move(*acc), os.str()};
}

ProtocolOutcome run_protocol(const ProtocolVariant& v, std::span<const DensityMatrix> pairs,
                             const std::optional<DensityMatrix>& control, const NoiseModel& nm) {
  v.validate();
  if (static_cast<int>(pairs.size()) != v.data_pairs()) {
    throw std::invalid_argument(to_string(v.base) + " expects " + std::to_string(v.data_pairs()) + " pairs");
  }
  if (v.superposed() && !control) throw std::invalid_argument(to_string(v.base) + " needs a control pair");
  if (v.subroutine != Subroutine::adaptive) return run_once(v, pairs, control, nm, v.subroutine == Subroutine::p1);

  std::optional<ProtocolOutcome> without, with;
  try {
    without = run_once(v, pairs, control, nm, false);
  } catch (const NoSurvivorError&) {
  }
  try {
    with = run_once(v, pairs, control, nm, true);
  } catch (const NoSurvivorError&) {
  }
  if (!without && !with) throw NoSurvivorError("no kept branch carries weight for " + v.describe());
  if (!with) return *without;
  if (!without) return *with;
  return with->fidelity() > without->fidelity() ? *with : *without;
}

ProtocolOutcome single_selection(const DensityMatrix& rho1, const DensityMatrix& rho2, const ProtocolVariant& v,
                                 const NoiseModel& nm) {
  const DensityMatrix pairs[] = {rho1, rho2};
  ProtocolVariant w = v;
  w.base = ProtocolKind::single;
  return run_protocol(w, pairs, std::nullopt, nm);
}

ProtocolOutcome double_selection(const DensityMatrix& rho1, const DensityMatrix& rho2, const DensityMatrix& rho3,
                                 const ProtocolVariant& v, const NoiseModel& nm) {
  const DensityMatrix pairs[] = {rho1, rho2, rho3};
  ProtocolVariant w = v;
  w.base = ProtocolKind::double_selection;
  return run_protocol(w, pairs, std::nullopt, nm);
}

ProtocolOutcome triple_selection(std::span<const DensityMatrix> pairs, const ProtocolVariant& v,
                                 const NoiseModel& nm) {
  ProtocolVariant w = v;
  w.base = ProtocolKind::triple_selection;
  return run_protocol(w, pairs, std::nullopt, nm);
}

ProtocolOutcome superposed_role_exchange(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                         const DensityMatrix& control, const ProtocolVariant& v,
                                         const NoiseModel& nm) {
  const DensityMatrix pairs[] = {rho1, rho2};
  ProtocolVariant w = v;
  w.base = ProtocolKind::superposed_single;
  w.control_dim = 2;
  return run_protocol(w, pairs, control, nm);
}

ProtocolOutcome superposed_double_selection(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                            const DensityMatrix& rho3, const DensityMatrix& control,
                                            const ProtocolVariant& v, const NoiseModel& nm) {
  const DensityMatrix pairs[] = {rho1, rho2, rho3};
  ProtocolVariant w = v;
  w.base = ProtocolKind::superposed_double;
  w.control_dim = control.dims().empty() ? 0 : control.dims()[0];
  return run_protocol(w, pairs, control, nm);
}

DensityMatrix inter_round_hadamard(const DensityMatrix& rho) {
  const int alice[] = {0};
  const int bob[] = {1};
  const Matrix h = gate_hadamard();
  return apply_unitary(apply_unitary(rho, h, alice), h, bob);
}

DensityMatrix make_control_state(int control_dim, double fidelity) {
  if (control_dim < 2) throw std::domain_error("control dimension must be at least 2");
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw std::domain_error("control fidelity outside [0,1]");
  const int d = control_dim;
  const double fc = std::pow(fidelity, std::log2(static_cast<double>(d)));
  Vector phi = Vector::Zero(d * d);
  for (int k = 0; k < d; ++k) phi(k * d + k) = 1.0 / std::sqrt(static_cast<double>(d));
  const Matrix proj = phi * phi.adjoint();
  const Matrix rest = Matrix::Identity(d * d, d * d) - proj;
  return DensityMatrix({d, d}, fc * proj + (1.0 - fc) / (d * d - 1.0) * rest);
}

}  // namespace epsim
