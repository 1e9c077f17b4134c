#include <gtest/gtest.h>

#include "epsim/channels.hpp"
#include "epsim/density.hpp"
#include "epsim/gates.hpp"
#include "test_util.hpp"

using namespace epsim;

namespace {

DensityMatrix basis_state(const Dims& dims, Index k) {
  Vector v = Vector::Zero(total_dimension(dims));
  v(k) = 1.0;
  return DensityMatrix::from_pure(dims, v);
}

}  // namespace

TEST(Density, ConstructionChecksShape) {
  EXPECT_THROW(DensityMatrix({2, 2}, Matrix::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(DensityMatrix::from_pure({2}, Vector::Zero(3)), std::invalid_argument);
  EXPECT_THROW(DensityMatrix::maximally_mixed({64, 128}), std::length_error);
}

TEST(Density, MaximallyMixedIsValid) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed({3, 2});
  EXPECT_TRUE(rho.is_valid_state());
  EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
  EXPECT_NEAR(rho.min_eigenvalue(), 1.0 / 6.0, 1e-15);
}

TEST(Density, PartialTraceOfProductMixedDims) {
  std::mt19937_64 rng(testutil::kSeed);
  const DensityMatrix a = testutil::random_state(rng, {3});
  const DensityMatrix b = testutil::random_state(rng, {2});
  const DensityMatrix c = testutil::random_state(rng, {2});
  const std::vector<DensityMatrix> parts{a, b, c};
  const DensityMatrix abc = tensor(parts);
  const std::vector<int> keep_a{0}, keep_ac{0, 2}, keep_b{1};
  EXPECT_LT(testutil::max_abs(partial_trace(abc, keep_a).data() - a.data()), 1e-14);
  EXPECT_LT(testutil::max_abs(partial_trace(abc, keep_b).data() - b.data()), 1e-14);
  EXPECT_LT(testutil::max_abs(partial_trace(abc, keep_ac).data() - tensor(a, c).data()), 1e-14);
}

TEST(Density, UnitaryTargetOrderMatters) {
  // cNOT with control on subsystem 1 and target on subsystem 0: |01⟩ → |11⟩
  const std::vector<int> reversed{1, 0};
  const DensityMatrix out = apply_unitary(basis_state({2, 2}, 1), gate_cnot(), reversed);
  EXPECT_NEAR(out.data()(3, 3).real(), 1.0, 1e-15);
}

TEST(Density, UnitaryOnMiddleSubsystem) {
  const Matrix x = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const std::vector<int> middle{1};
  const DensityMatrix out = apply_unitary(basis_state({3, 2, 2}, 0), x, middle);
  EXPECT_NEAR(out.data()(2, 2).real(), 1.0, 1e-15);
}

TEST(Density, RejectsBadTargets) {
  const DensityMatrix rho = DensityMatrix::maximally_mixed({2, 2});
  const std::vector<int> repeated{0, 0}, outside{2}, single{0};
  EXPECT_THROW(apply_unitary(rho, gate_cnot(), repeated), std::invalid_argument);
  EXPECT_THROW(apply_unitary(rho, gate_hadamard(), outside), std::invalid_argument);
  EXPECT_THROW(apply_unitary(rho, gate_cnot(), single), std::invalid_argument);
  EXPECT_THROW(apply_unitary(rho, 2.0 * gate_hadamard(), single), std::invalid_argument);
}

TEST(Density, MeasurementBranchesSumToOne) {
  std::mt19937_64 rng(testutil::kSeed + 2);
  const DensityMatrix rho = testutil::random_state(rng, {3, 2});
  const MeasurementBasis f = MeasurementBasis::fourier(3);
  double total = 0.0;
  for (int o = 0; o < 3; ++o) {
    const DensityMatrix rest = measure_and_discard(rho, 0, f.projector(o));
    EXPECT_EQ(rest.dims(), Dims{2});
    const Branch kept = measure(rho, 0, f, o);
    EXPECT_NEAR(kept.probability, rest.trace(), 1e-14);
    total += rest.trace();
  }
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Density, NormalizeRejectsZeroBranch) {
  const DensityMatrix zero = basis_state({2}, 0).scaled(0.0);
  EXPECT_THROW(zero.normalized(), std::domain_error);
}
