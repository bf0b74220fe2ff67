// Copyright 2026 The distmet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "distmet/network.hpp"
#include "distmet/protocols.hpp"
#include "distmet/random.hpp"
#include "oracles.hpp"

namespace distmet {
namespace {

using testing::sector;
using testing::transition_amplitude;

TEST(ModeUnitary, Validates) {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(ModeUnitary{m}, ValidationError);
  EXPECT_THROW(ModeUnitary{Eigen::MatrixXcd(2, 3)}, ValidationError);
  EXPECT_NO_THROW(ModeUnitary::identity(4));
}

TEST(ModeUnitary, HaarIsUnitaryAndSeeded) {
  Rng a(3), b(3);
  const auto u = ModeUnitary::haar(5, a);
  const auto v = ModeUnitary::haar(5, b);
  EXPECT_LT(unitarity_deviation(u.matrix()), 1e-12);
  EXPECT_EQ((u.matrix() - v.matrix()).norm(), 0.0);
  EXPECT_LT(((u * u.adjoint()).matrix() - Eigen::MatrixXcd::Identity(5, 5)).norm(), 1e-12);
}

TEST(Decompose, RecomposesRandomUnitaries) {
  Rng rng(99);
  for (int m = 1; m <= 8; ++m) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = ModeUnitary::haar(m, rng);
      const auto seq = decompose(u);
      EXPECT_LT((recompose(seq) - u.matrix()).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE(seq.beam_splitter_count(), static_cast<std::size_t>(m * (m - 1) / 2));
      EXPECT_LE(seq.size(), static_cast<std::size_t>(m * (m - 1) / 2 + m));
      EXPECT_LT((recompose(inverse(seq)) - u.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Decompose, KeepTrivialMatchesTriangularLayout) {
  Rng rng(4);
  DecomposeOptions keep;
  keep.keep_trivial_gates = true;
  for (int m : {2, 4, 6}) {
    const auto seq = decompose(ModeUnitary::identity(m), keep);
    const auto layout = triangular_layout(m);
    ASSERT_EQ(seq.size(), layout.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
      EXPECT_EQ(seq.gates()[k].index(), layout.gates()[k].index());
      if (const auto* bs = std::get_if<BeamSplitterGate>(&seq.gates()[k])) {
        const auto& ref = std::get<BeamSplitterGate>(layout.gates()[k]);
        EXPECT_EQ(bs->i, ref.i);
        EXPECT_EQ(bs->j, ref.j);
      }
    }
    const auto full = decompose(ModeUnitary::haar(m, rng), keep);
    EXPECT_EQ(full.size(), layout.size());
  }
}

TEST(Decompose, HandlesPermutationsAndDiagonals) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(3, 3);
  p(1, 0) = 1.0;
  p(2, 1) = Amplitude(0.0, 1.0);
  p(0, 2) = -1.0;
  const auto seq = decompose(ModeUnitary(p));
  EXPECT_LT((recompose(seq) - p).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GateSequence, RejectsBadGates) {
  EXPECT_THROW(GateSequence(2, {BeamSplitterGate{0, 2, 0.5, 0.0}}), ValidationError);
  EXPECT_THROW(GateSequence(2, {BeamSplitterGate{0, 1, -0.1, 0.0}}), ValidationError);
  EXPECT_THROW(GateSequence(2, {PhaseGate{3, 0.0}}), ValidationError);
  EXPECT_THROW(GateSequence(0), ValidationError);
}

TEST(ApplyModeUnitary, MatchesPermanentOracle) {
  Rng rng(17);
  for (int m : {2, 3, 4}) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto u = ModeUnitary::haar(m, rng);
      Occupation in(static_cast<std::size_t>(m), 0);
      const int total = rng.integer(1, 4);
      for (int k = 0; k < total; ++k) ++in[static_cast<std::size_t>(rng.integer(0, m - 1))];
      const auto out = apply_mode_unitary(FockState::basis(in), u);
      for (const auto& occ : sector(m, total)) {
        EXPECT_NEAR(std::abs(out.amplitude(occ) - transition_amplitude(u.matrix(), in, occ)), 0.0, 1e-10);
      }
    }
  }
}

TEST(ApplyModeUnitary, SuperpositionInputIsLinear) {
  Rng rng(2);
  const auto u = ModeUnitary::haar(3, rng);
  const double r = 1.0 / std::sqrt(2.0);
  FockState s(3, 2, {{{1, 1, 0}, r}, {{0, 0, 2}, Amplitude(0.0, r)}});
  const auto out = apply_mode_unitary(s, u);
  for (const auto& occ : sector(3, 2)) {
    const Amplitude expect = r * transition_amplitude(u.matrix(), {1, 1, 0}, occ) +
                             Amplitude(0.0, r) * transition_amplitude(u.matrix(), {0, 0, 2}, occ);
    EXPECT_NEAR(std::abs(out.amplitude(occ) - expect), 0.0, 1e-10);
  }
}

TEST(Hoarding, ColumnsForEqualMagnitudes) {
  const auto w = WeightVector({0.5, -0.5});
  const auto u = hoarding_unitary(w);
  EXPECT_EQ(u.dim(), 4);
  EXPECT_LT(unitarity_deviation(u.matrix()), 1e-12);
  // √(|w_i|/2) and w_i/√(2|w_i|)
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(u(i, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(u(i + 2, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(u(i, 1).real(), w[i] / std::sqrt(2.0 * std::abs(w[i])), 1e-15);
    EXPECT_NEAR(u(i + 2, 1).real(), -w[i] / std::sqrt(2.0 * std::abs(w[i])), 1e-15);
  }
}

TEST(Hoarding, UnitaryForArbitraryWeights) {
  Rng rng(1);
  for (int d = 1; d <= 5; ++d) {
    std::vector<double> raw(static_cast<std::size_t>(d));
    for (double& x : raw) x = rng.uniform(-1.0, 1.0);
    raw[0] = 0.0;  // zero weights are allowed
    raw[static_cast<std::size_t>(d - 1)] = 1.0;
    const auto u = hoarding_unitary(WeightVector::normalized(raw));
    EXPECT_LT(unitarity_deviation(u.matrix()), 1e-12);
  }
}

// The 2d-2 completed columns act on vacuum ports; Δq must not depend on them.
TEST(Hoarding, CompletionColumnsDoNotMatter) {
  Rng rng(6);
  for (int d : {2, 3}) {
    const auto w = WeightVector::uniform(d);
    const auto base = hoarding_unitary(w);
    const auto ref = twin_fock_interferometer(d, 4, w).run(1e-3, 1e-4, {});
    Eigen::MatrixXcd mix = Eigen::MatrixXcd::Identity(2 * d, 2 * d);
    mix.bottomRightCorner(2 * d - 2, 2 * d - 2) = ModeUnitary::haar(2 * d - 2, rng).matrix();
    const ModeUnitary other(base.matrix() * mix);
    Occupation occ(static_cast<std::size_t>(2 * d), 0);
    occ[0] = occ[1] = 2;
    const Interferometer net(FockState::basis(occ), decompose(other), default_phase_modes(d), w);
    EXPECT_NEAR(net.run(1e-3, 1e-4, {}).delta_q, ref.delta_q, 1e-9);
  }
}

TEST(Fig2Network, ValidatesWeights) {
  EXPECT_THROW(fig2_network(1, 0.5, -0.5), ValidationError);
  EXPECT_THROW(fig2_network(1, 0.4, 0.3), ValidationError);
  EXPECT_NO_THROW(fig2_network(1, 0.5, 0.25));
  const auto net = fig2_network(2, 0.5, 0.5);
  EXPECT_EQ(net.circuit.modes(), 3);
  EXPECT_EQ(net.input.amplitude({2, 2, 0}), Amplitude(1.0, 0.0));
}

TEST(WrapAngle, IntoHalfOpenInterval) {
  EXPECT_NEAR(wrap_angle(3.0 * std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(-std::numbers::pi), std::numbers::pi, 1e-12);
  EXPECT_NEAR(wrap_angle(0.5), 0.5, 1e-15);
}

}  // namespace
}  // namespace distmet
