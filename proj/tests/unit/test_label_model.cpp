#include <gtest/gtest.h>

#include "epsim/label_model.hpp"
#include "epsim/protocols.hpp"
#include "test_util.hpp"

using namespace epsim;

namespace {

struct Case {
  const SelectionCircuit& circuit;
  oracle::Program program;
};

}  // namespace

TEST(LabelModel, AgreesWithPauliFrameOracle) {
  std::mt19937_64 rng(testutil::kSeed);
  const std::vector<Case> cases{{single_selection_circuit(), oracle::single_program()},
                                {double_selection_circuit(), oracle::double_program()},
                                {triple_selection_circuit(), oracle::triple_program()}};
  for (const auto& c : cases) {
    for (int t = 0; t < 20; ++t) {
      std::vector<BellDiagonalState> in;
      std::vector<oracle::Populations> raw;
      for (int k = 0; k < c.circuit.num_pairs; ++k) {
        in.push_back(testutil::random_bell(rng));
        raw.push_back(in.back().coefficients());
      }
      const LabelOutcome got = propagate_labels(c.circuit, in);
      const oracle::FrameResult ref = oracle::pauli_frame(c.program, raw);
      EXPECT_NEAR(got.success_probability, ref.success, 1e-14) << c.circuit.name;
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(got.weights[k], ref.weights[k], 1e-14) << c.circuit.name;
    }
  }
}

TEST(LabelModel, EngineMatchesLabelsOnRandomInputs) {
  std::mt19937_64 rng(testutil::kSeed + 1);
  for (const SelectionCircuit* c : {&single_selection_circuit(), &double_selection_circuit()}) {
    for (int t = 0; t < 5; ++t) {
      std::vector<BellDiagonalState> in;
      std::vector<DensityMatrix> rho;
      for (int k = 0; k < c->num_pairs; ++k) {
        in.push_back(testutil::random_bell(rng));
        rho.push_back(to_density(in.back()));
      }
      const LabelOutcome labels = propagate_labels(*c, in);
      const DensityMatrix kept =
          select_branches(execute(*c, rho, std::nullopt, {}, NoiseModel::noiseless()), KeptSet::all).state;
      const BellDiagonalState got = bell_diagonal_part(kept.normalized());
      const BellDiagonalState want = labels.normalized();
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(got.coefficients()[k], want.coefficients()[k], 1e-12);
    }
  }
}

TEST(LabelModel, NothingSurvives) {
  const BellDiagonalState flip({0.0, 1.0, 0.0, 0.0});
  const std::vector<BellDiagonalState> in{BellDiagonalState::werner(1.0), flip};
  const LabelOutcome out = propagate_labels(single_selection_circuit(), in);
  EXPECT_EQ(out.success_probability, 0.0);
  EXPECT_THROW(out.normalized(), std::domain_error);
}

TEST(LabelModel, HadamardSwapsFlipAndPhase) {
  const BellDiagonalState s({0.5, 0.3, 0.15, 0.05});
  const auto h = hadamard_relabel(s).coefficients();
  EXPECT_EQ(h[0], 0.5);
  EXPECT_EQ(h[1], 0.15);
  EXPECT_EQ(h[2], 0.3);
  EXPECT_EQ(h[3], 0.05);
}
