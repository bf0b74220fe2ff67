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

#include "distmet/bounds.hpp"
#include "distmet/protocols.hpp"
#include "distmet/qfi.hpp"
#include "distmet/random.hpp"

namespace distmet {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(ErrorPropagation, BalancedCosineSquared) {
  const auto f = [](double q) {
    const double o = std::cos(q) * std::cos(q);
    return Expectation{o, o};
  };
  const auto p = error_propagation(f, std::numbers::pi / 4.0, 1e-4);
  EXPECT_NEAR(p.delta_q, 0.5, 1e-8);
  EXPECT_NEAR(p.derivative, -1.0, 1e-8);
}

TEST(ErrorPropagation, ConstantIsInsensitive) {
  const auto f = [](double) { return Expectation{0.3, 0.3}; };
  EXPECT_THROW(error_propagation(f, 0.1, 1e-4), InsensitivePoint);
  EXPECT_THROW(error_propagation(f, 0.1, 0.0), ValidationError);
}

TEST(ErrorPropagation, TwinFockAtZeroIsInsensitive) {
  const auto net = twin_fock_interferometer(2, 2, WeightVector::uniform(2));
  EXPECT_THROW(error_propagation([&](double q) { return net.expectation(q); }, 0.0, 1e-4), InsensitivePoint);
}

TEST(TwinFock, HeisenbergFormula) {
  for (int d : {1, 2, 3}) {
    for (int n : {2, 4, 6}) {
      const auto r = twin_fock_protocol(d, n, WeightVector::uniform(d));
      EXPECT_LT(rel(r.delta_q, twin_fock_formula(n)), 0.01) << "d=" << d << " N=" << n;
      EXPECT_GE(r.expected_O, 0.0);
      EXPECT_LE(r.expected_O, 1.0);
    }
  }
  EXPECT_NEAR(twin_fock_protocol(2, 2, WeightVector::uniform(2)).delta_q, 0.5, 0.005);
  EXPECT_NEAR(twin_fock_protocol(2, 4, WeightVector::uniform(2)).delta_q, 2.0 / std::sqrt(48.0), 0.003);
}

TEST(TwinFock, ProbeAtZeroReturnsInput) {
  const auto net = twin_fock_interferometer(3, 4, WeightVector::uniform(3));
  EXPECT_NEAR(net.expectation(0.0).first, 1.0, 1e-12);
}

TEST(TwinFock, Errors) {
  EXPECT_THROW(twin_fock_protocol(2, 3, WeightVector::uniform(2)), ValidationError);
  EXPECT_THROW(twin_fock_protocol(2, 4, WeightVector::uniform(3)), DimensionError);
  EXPECT_THROW(twin_fock_protocol(2, 4, WeightVector::uniform(2), 1e-3, 1e-4, std::nullopt, 2), DimensionError);
}

TEST(TwinFock, PhasesEncodeQ) {
  const auto w = WeightVector({1.0 / 3, -0.25, 0.1});
  const auto theta = allocate_phases(w, 0.01);
  double q = 0.0;
  for (int j = 0; j < 3; ++j) q += w[j] * theta[static_cast<std::size_t>(j)];
  EXPECT_NEAR(q, 0.01, 1e-16);
  EXPECT_THROW(allocate_phases(WeightVector({0.5, 0.5}), 0.1, PhaseVector{1.0, -1.0}), ValidationError);
}

// Second derivative of <O>(q) is -N(N+2)/4.
TEST(TwinFock, QuadraticLaw) {
  for (int d : {2, 3}) {
    for (int n : {2, 4, 6}) {
      const auto net = twin_fock_interferometer(d, n, WeightVector::uniform(d));
      // least squares O = c0 + c2 q² over q in {±1e-3, ±2e-3}
      double s0 = 0, s2 = 0, s4 = 0, y0 = 0, y2 = 0;
      for (double q : {-2e-3, -1e-3, 1e-3, 2e-3}) {
        const double o = net.expectation(q).first;
        s0 += 1;
        s2 += q * q;
        s4 += q * q * q * q;
        y0 += o;
        y2 += o * q * q;
      }
      const double c2 = (s0 * y2 - s2 * y0) / (s0 * s4 - s2 * s2);
      EXPECT_LT(rel(2.0 * c2, -n * (n + 2) / 4.0), 0.005) << "d=" << d << " N=" << n;
    }
  }
}

TEST(Fig2, CaptionFormula) {
  for (int n : {1, 2, 3}) {
    EXPECT_LT(rel(fig2_protocol(n, 0.5, 0.5).delta_q, fig2_formula(n)), 0.01);
  }
  EXPECT_NEAR(fig2_protocol(1, 0.5, 0.5).delta_q, 0.5, 0.005);
  EXPECT_NEAR(fig2_protocol(3, 0.5, 0.5).delta_q, 1.0 / std::sqrt(24.0), 0.002);
  EXPECT_NEAR(fig2_interferometer(1, 0.5, 0.5).expectation(0.0).first, 1.0, 1e-12);
}

TEST(Fig2, UnequalWeightsAndErrors) {
  const auto r = fig2_protocol(1, 0.5, 0.25);
  EXPECT_GT(r.delta_q, 0.0);
  EXPECT_TRUE(std::isfinite(r.delta_q));
  EXPECT_THROW(fig2_protocol(1, 0.5, 0.0), ValidationError);
  EXPECT_THROW(fig2_protocol(1, 0.3, 0.2), ValidationError);
}

TEST(Fig2, MatchesFourModeScheme) {
  for (int n : {1, 2, 3}) {
    const double a = fig2_protocol(n, 0.5, 0.5).delta_q;
    const double b = twin_fock_protocol(2, 2 * n, WeightVector::uniform(2)).delta_q;
    EXPECT_LT(rel(a, b), 0.01);
  }
}

TEST(Classical, Baseline) {
  EXPECT_NEAR(classical_baseline(2, WeightVector::uniform(2)), 1.0 / std::sqrt(8.0), 1e-15);
  EXPECT_NEAR(classical_baseline(4, WeightVector::uniform(2)), 1.0 / std::sqrt(24.0), 1e-15);
  EXPECT_NEAR(classical_baseline(4, WeightVector({1.0})), twin_fock_node_sensitivity(4), 1e-15);
  EXPECT_THROW(classical_baseline(3, WeightVector({1.0})), ValidationError);
}

// For w = ±(1/d)·1 the phases stay inside the two occupied modes, the
// multi-parameter bound is attained and the result does not depend on d or sign.
TEST(Consistency, SignUniformWeights) {
  for (int d = 1; d <= 4; ++d) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> raw(static_cast<std::size_t>(d), sign / d);
      const WeightVector w(raw);
      for (int n : {2, 4}) {
        const auto net = twin_fock_interferometer(d, n, w);
        const auto r = net.run(1e-3, 1e-4, {});
        const auto f = qfi_direct(net.spread_state(), default_phase_modes(d));
        EXPECT_GE(r.delta_q, crb_delta_q(f, w) - 1e-9);
        EXPECT_LT(rel(r.delta_q, crb_delta_q(f, w)), 1e-4);
        EXPECT_LT(rel(r.delta_q, twin_fock_formula(n)), 0.01);
      }
    }
  }
}

TEST(Consistency, ArbitraryWeightsRespectSingleParameterAndFockBounds) {
  Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = rng.integer(2, 3);
    std::vector<double> raw(static_cast<std::size_t>(d));
    const bool positive = trial % 2 == 0;
    for (double& x : raw) x = positive ? rng.uniform(0.1, 1.0) : rng.uniform(-1.0, 1.0);
    const auto w = WeightVector::normalized(raw);
    const int n = 2 * rng.integer(1, 2);
    const auto net = twin_fock_interferometer(d, n, w);
    const auto r = net.run(1e-3, 1e-4, {});
    const auto f = qfi_direct(net.spread_state(), default_phase_modes(d));
    EXPECT_GE(r.delta_q, crb_cauchy_schwarz(f.weighted(w), w) - 1e-9);
    if (positive) {
      Occupation occ(static_cast<std::size_t>(2 * d), 0);
      occ[0] = occ[1] = n / 2;
      EXPECT_GE(r.delta_q, fock_delta_q_bound(std::vector<int>(occ.begin(), occ.end()), w));
    }
  }
}

// Mixed signs let the phases leak out of the occupied pair; with θ ∝ w the
// estimate then beats the twin-Fock formula and sits on |w|²/√F_w.
TEST(Consistency, MixedSignLeakage) {
  const auto w = WeightVector({0.5, -0.5});
  const auto net = twin_fock_interferometer(2, 2, w);
  const auto r = net.run(1e-3, 1e-4, {});
  const auto f = qfi_direct(net.spread_state(), {0, 1});
  EXPECT_LT(r.delta_q, 0.9 * twin_fock_formula(2));
  EXPECT_LT(rel(r.delta_q, crb_cauchy_schwarz(f.weighted(w), w)), 1e-5);
}

TEST(Metadata, Recorded) {
  const auto r = twin_fock_protocol(2, 4, WeightVector::uniform(2), 2e-3, 1e-4);
  EXPECT_EQ(r.metadata.scheme, "twin-fock");
  EXPECT_EQ(r.metadata.modes, 4);
  EXPECT_EQ(r.metadata.photons, 4);
  EXPECT_DOUBLE_EQ(r.q_eval, 2e-3);
  ASSERT_EQ(r.metadata.theta.size(), 2u);
  EXPECT_NEAR(r.metadata.theta[0], 2e-3, 1e-15);
}

}  // namespace
}  // namespace distmet
