#include <gtest/gtest.h>

#include "epsim/bell.hpp"
#include "epsim/gates.hpp"
#include "epsim/noise.hpp"
#include "test_util.hpp"

using namespace epsim;

TEST(NoiseModel, UniformAndValidation) {
  const NoiseModel m = NoiseModel::uniform(NoiseFamily::damping, 0.97);
  EXPECT_EQ(m.q_cnot, 0.97);
  EXPECT_EQ(m.q_cswap, 0.97);
  EXPECT_EQ(m.p_meas, 0.97);
  EXPECT_NO_THROW(m.validate());
  NoiseModel bad = m;
  bad.q_cswap = 1.2;
  EXPECT_THROW(bad.validate(), std::domain_error);
}

TEST(NoiseModel, FamilyNames) {
  for (auto f : {NoiseFamily::none, NoiseFamily::dephasing, NoiseFamily::depolarizing, NoiseFamily::damping,
                 NoiseFamily::composite}) {
    EXPECT_EQ(noise_family_from_string(to_string(f)), f);
  }
  EXPECT_THROW(noise_family_from_string("thermal"), std::invalid_argument);
}

TEST(NoiseModel, NoChannelWhenNoiseless) {
  EXPECT_FALSE(NoiseModel::noiseless().gate_channel(0.5, 2));
  EXPECT_FALSE(NoiseModel::uniform(NoiseFamily::depolarizing, 1.0).gate_channel(1.0, 2));
  EXPECT_TRUE(NoiseModel::uniform(NoiseFamily::depolarizing, 0.9).gate_channel(0.9, 2));
}

TEST(NoiseModel, QuditChannelsAreTracePreserving) {
  for (auto f : {NoiseFamily::dephasing, NoiseFamily::depolarizing, NoiseFamily::damping, NoiseFamily::composite}) {
    const NoiseModel m = NoiseModel::uniform(f, 0.9);
    for (int d : {2, 3, 4, 6}) {
      const auto c = m.gate_channel(0.9, d);
      ASSERT_TRUE(c);
      EXPECT_EQ(c->dim(), d);
      EXPECT_LT(cptp_deviation(c->ops()), 1e-13);
    }
  }
}

TEST(NoisyGate, DepolarizedCnotOnBellPair) {
  const std::vector<int> targets{0, 1};
  const DensityMatrix phi = to_density(BellDiagonalState::werner(1.0));
  const DensityMatrix out = noisy_gate(phi, Matrix::Identity(4, 4), targets,
                                       NoiseModel::uniform(NoiseFamily::depolarizing, 0.9), GateKind::cnot);
  // each side keeps the pair with probability 0.9; otherwise it is maximally mixed
  EXPECT_NEAR(fidelity_to_reference(out), 0.81 + 0.19 / 4, 1e-14);
}

TEST(NoisyGate, CswapStrengthSeparate) {
  NoiseModel m{NoiseFamily::dephasing, 1.0, 0.8, 1.0};
  EXPECT_EQ(m.strength(GateKind::cnot), 1.0);
  EXPECT_EQ(m.strength(GateKind::cswap), 0.8);
}

TEST(NoisyMeasure, ReadoutError) {
  Vector zero = Vector::Zero(2);
  zero(0) = 1.0;
  const DensityMatrix rho = DensityMatrix::from_pure({2}, zero);
  NoiseModel m = NoiseModel::uniform(NoiseFamily::depolarizing, 1.0);
  m.p_meas = 0.95;
  EXPECT_NEAR(noisy_measure(rho, 0, MeasurementBasis::z(), 1, m).probability, 0.05, 1e-15);
  EXPECT_NEAR(noisy_measure(rho, 0, MeasurementBasis::z(), 0, m).probability, 0.95, 1e-15);
}
