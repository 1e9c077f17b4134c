#include <gtest/gtest.h>

#include "epsim/metrics.hpp"
#include "test_util.hpp"

using namespace epsim;

namespace {

ProtocolVariant plain(ProtocolKind base = ProtocolKind::single) {
  ProtocolVariant v;
  v.base = base;
  return v;
}

RoundRecord rec(int round, double f, double p) {
  RoundRecord r;
  r.round = round;
  r.fidelity = f;
  r.success_probability = p;
  return r;
}

}  // namespace

TEST(Iterate, TwirledBbpsswFollowsRecurrence) {
  const Trajectory t = iterate(plain(), NoiseModel::noiseless(), to_density(BellDiagonalState::werner(0.6)), 3,
                               {true, false, ControlSource::identical});
  ASSERT_EQ(t.rounds.size(), 4u);
  EXPECT_FALSE(t.aborted);
  double f = 0.6, product = 1.0;
  for (int k = 1; k <= 3; ++k) {
    const auto ref = oracle::bbpssw_werner(f);
    product *= ref.success;
    EXPECT_NEAR(t.rounds[k].fidelity, ref.fidelity, 1e-12);
    EXPECT_NEAR(t.rounds[k].success_probability, ref.success, 1e-12);
    EXPECT_NEAR(t.rounds[k].yield_with_control, product / std::pow(2.0, k), 1e-12);
    EXPECT_GT(t.rounds[k].fidelity, t.rounds[k - 1].fidelity);
    f = ref.fidelity;
  }
}

TEST(Iterate, AbortsWhenNothingSurvives) {
  // a phase-flipped copy as control always reads anti-correlated in the X basis
  ProtocolVariant v = plain(ProtocolKind::superposed_single);
  v.kept = KeptSet::coherent_only;
  const Trajectory t = iterate(v, NoiseModel::noiseless(), to_density(BellDiagonalState({0, 0, 1, 0})), 3, {});
  EXPECT_TRUE(t.aborted);
  EXPECT_EQ(t.rounds.size(), 1u);
  EXPECT_FALSE(t.abort_reason.empty());
}

TEST(Iterate, SuperposedYieldCountsControl) {
  ProtocolVariant v = plain(ProtocolKind::superposed_single);
  const Trajectory t = iterate(v, NoiseModel::noiseless(), to_density(BellDiagonalState::werner(0.8)), 2, {});
  const double p1 = t.rounds[1].success_probability;
  EXPECT_NEAR(t.rounds[1].yield_with_control, p1 / 3.0, 1e-15);
  EXPECT_NEAR(t.rounds[1].yield_without_control, p1 / 2.0, 1e-15);
}

TEST(Iterate, RejectsZeroRounds) {
  EXPECT_THROW(iterate(plain(), {}, to_density(BellDiagonalState::werner(0.8)), 0, {}), std::invalid_argument);
}

TEST(ControlForRound, Sources) {
  const DensityMatrix cur = to_density(BellDiagonalState({0.8, 0.1, 0.05, 0.05}));
  ProtocolVariant v = plain(ProtocolKind::superposed_single);
  EXPECT_LT(testutil::max_abs(control_for_round(v, cur, ControlSource::identical).data() - cur.data()), 1e-15);
  EXPECT_LT(testutil::max_abs(control_for_round(v, cur, ControlSource::perfect).data() -
                              make_control_state(2, 1.0).data()),
            1e-15);
  v = plain(ProtocolKind::superposed_double);
  v.control_dim = 3;
  EXPECT_LT(testutil::max_abs(control_for_round(v, cur, ControlSource::identical).data() -
                              make_control_state(3, 0.8).data()),
            1e-15);
}

TEST(Yield, ProductOverRoundsToTarget) {
  Trajectory t;
  t.rounds = {rec(0, 0.8, 1.0), rec(1, 0.9, 0.5), rec(2, 0.96, 0.8), rec(3, 0.99, 0.9)};
  const YieldResult y = yield(t, 0.95, 2.0);
  ASSERT_TRUE(y.rounds_to_target);
  EXPECT_EQ(*y.rounds_to_target, 2);
  EXPECT_NEAR(y.value, 0.5 * 0.8 / 4.0, 1e-15);
  EXPECT_FALSE(yield(t, 0.995, 2.0).rounds_to_target);
  EXPECT_EQ(yield(t, 0.995, 2.0).value, 0.0);
  EXPECT_EQ(*yield(t, 0.7, 2.0).rounds_to_target, 0);
  EXPECT_THROW(yield(t, 0.9, 0.0), std::invalid_argument);
}

TEST(FixedPoint, NoiselessConvergesToOne) {
  const FixedPoint fp = fixed_point(plain(), NoiseModel::noiseless(), 0.8);
  EXPECT_TRUE(fp.converged);
  EXPECT_NEAR(fp.fidelity, 1.0, 1e-8);
}

TEST(FixedPoint, NoiseCapsFidelity) {
  const FixedPoint fp = fixed_point(plain(), NoiseModel::uniform(NoiseFamily::depolarizing, 0.98), 0.9);
  EXPECT_TRUE(fp.converged);
  EXPECT_LT(fp.fidelity, 0.9);
  EXPECT_GT(fp.fidelity, 0.8);
}

TEST(Regime, NoiselessSingleOperatesAboveHalf) {
  const OperationalRegime r = operational_regime_at(plain(), NoiseModel::noiseless(), 1.0);
  ASSERT_TRUE(r.operates);
  EXPECT_GT(r.f_min, 0.5);
  EXPECT_LT(r.f_min, 0.5 + 2e-3);
  EXPECT_NEAR(r.f_max, 1.0, 1e-6);
}

TEST(Regime, HeavyNoiseBreaksProtocol) {
  const auto rs = operational_regime(plain(), NoiseFamily::depolarizing, {0.8, 1.0});
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_FALSE(rs[0].operates);
  EXPECT_TRUE(rs[1].operates);
  EXPECT_GT(werner_gain(plain(), NoiseModel::noiseless(), 0.7), 0.0);
  EXPECT_LT(werner_gain(plain(), NoiseModel::uniform(NoiseFamily::depolarizing, 0.8), 0.7), 0.0);
}

TEST(Regime, BreakdownScansFromNoiselessEnd) {
  auto reg = [](double q, bool ok) {
    OperationalRegime r;
    r.q = q;
    r.operates = ok;
    return r;
  };
  EXPECT_EQ(breakdown_strength({reg(0.9, false), reg(0.95, true), reg(1.0, true)}), 0.95);
  EXPECT_EQ(breakdown_strength({reg(0.9, true), reg(0.95, false), reg(1.0, true)}), 1.0);
  EXPECT_FALSE(breakdown_strength({reg(0.9, false), reg(1.0, false)}));
}

TEST(PauliTrajectory, CoefficientsStayNormalized) {
  ProtocolVariant v = plain(ProtocolKind::double_selection);
  v.oxford = true;
  const auto traj = pauli_trajectory(v, BellDiagonalState({0.6, 0.0, 0.4, 0.0}), 5);
  ASSERT_EQ(traj.size(), 6u);
  for (const auto& p : traj) {
    EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, 1e-12);
    for (double x : p) EXPECT_GE(x, -1e-12);
  }
  EXPECT_GT(traj.back()[0], traj.front()[0]);
}
