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

#include "distmet/nelder_mead.hpp"
#include "distmet/optimizer.hpp"

namespace distmet {
namespace {

TEST(NelderMead, Rosenbrock) {
  const auto f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions o;
  o.max_evaluations = 5000;
  o.diameter_tolerance = 1e-10;
  const auto r = nelder_mead(f, {-1.2, 1.0}, o);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.evaluations, o.max_evaluations);
}

TEST(NelderMead, QuadraticInManyDimensions) {
  const auto f = [](const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.1 * i) * (x[i] - 0.1 * i);
    return s;
  };
  NelderMeadOptions o;
  o.max_evaluations = 40000;
  const auto r = nelder_mead(f, std::vector<double>(8, 1.0), o);
  EXPECT_LT(r.value, 1e-12);
}

TEST(NelderMead, ZeroBudgetRejected) {
  NelderMeadOptions o;
  o.max_evaluations = 0;
  EXPECT_THROW(nelder_mead([](const std::vector<double>&) { return 0.0; }, {0.0}, o), ValidationError);
}

TEST(MeshParameters, RoundTripThroughSequence) {
  Rng rng(5);
  const auto u = ModeUnitary::haar(4, rng);
  DecomposeOptions keep;
  keep.keep_trivial_gates = true;
  const auto p = MeshParameters::from_sequence(decompose(u, keep));
  EXPECT_EQ(p.angles().size(), MeshParameters::parameter_count(triangular_layout(4)));
  EXPECT_LT((recompose(p.sequence()) - u.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  const MeshParameters q(triangular_layout(4), p.angles());
  EXPECT_LT((recompose(q.sequence()) - u.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(MeshParameters(triangular_layout(4), {1.0}), DimensionError);
  EXPECT_THROW(MeshParameters(triangular_layout(1), {std::nan("")}), ValidationError);
}

OptimizerOptions small(std::uint64_t seed, std::size_t budget = 1500, int restarts = 4) {
  OptimizerOptions o;
  o.seed = seed;
  o.budget = budget;
  o.restarts = restarts;
  return o;
}

// Exhaustive oracle: F for |1,1> behind one splitter of transmissivity t is
// 16 t(1-t), maximal (4) at t = 1/2.
TEST(MaximizeFw, TwoSinglePhotons) {
  double grid = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double t = k / 1000.0;
    const auto s = apply_beam_splitter(FockState::basis({1, 1}), 0, 1, t, 0.0);
    grid = std::max(grid, qfi_direct(s, {0}).entries()(0, 0));
  }
  EXPECT_NEAR(grid, 4.0, 1e-12);
  const std::vector<SingleModeState> in = {SingleModeState::fock(1), SingleModeState::fock(1)};
  const auto r = maximize_fw(in, WeightVector({1.0}), triangular_layout(2), small(1));
  EXPECT_GE(r.best_fw, grid - 1e-6);
  EXPECT_EQ(r.bound_kind, "fock");
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GE(r.gap, -1e-9);
}

TEST(MaximizeFw, VacuumGivesZero) {
  const std::vector<SingleModeState> in(4, SingleModeState::vacuum());
  const auto r = maximize_fw(in, WeightVector::uniform(2), triangular_layout(4), small(2, 200, 2));
  EXPECT_EQ(r.best_fw, 0.0);
  EXPECT_EQ(r.bound_value, 0.0);
}

// The hoarding unitary gives 2(d+1)/d on |d, d, 0, ...>; nothing better is found.
TEST(MaximizeFw, HoardedWitness) {
  const auto w = WeightVector::uniform(2);
  const std::vector<SingleModeState> in = {SingleModeState::fock(2), SingleModeState::fock(2),
                                           SingleModeState::vacuum(), SingleModeState::vacuum()};
  std::vector<MomentSet> mo;
  for (const auto& s : in) mo.push_back(single_mode_moments(s));
  const double witness = qfi_from_moments(hoarding_unitary(w), mo, w);
  EXPECT_NEAR(witness, 3.0, 1e-12);
  auto o = small(3, 3000, 6);
  o.warm_start = hoarding_warm_start(w);
  const auto r = maximize_fw(in, w, triangular_layout(4), o);
  EXPECT_GE(r.best_fw, witness - 1e-9);
  EXPECT_NEAR(r.best_fw, 3.0, 1e-6);
  EXPECT_DOUBLE_EQ(r.bound_value, 8.0);
  EXPECT_EQ(r.violations, 0u);
}

TEST(MaximizeFw, SeparableInputUsesSeparableBound) {
  const auto c = coherent_state({0.5, 0.1}, 6).state;
  const std::vector<SingleModeState> in = {c, SingleModeState::fock(1), c};
  const auto r = maximize_fw(in, WeightVector({0.5, 0.3}), triangular_layout(3), small(4));
  EXPECT_EQ(r.bound_kind, "separable");
  EXPECT_LE(r.best_fw, r.bound_value + 1e-9);
  EXPECT_EQ(r.violations, 0u);
}

TEST(MaximizeFw, DeterministicAndMonotoneInBudget) {
  const std::vector<SingleModeState> in = {SingleModeState::fock(1), SingleModeState::fock(2), SingleModeState::vacuum()};
  const auto w = WeightVector({0.5, -0.4});
  const auto a = maximize_fw(in, w, triangular_layout(3), small(9, 300));
  const auto b = maximize_fw(in, w, triangular_layout(3), small(9, 300));
  EXPECT_EQ(a.best_fw, b.best_fw);
  EXPECT_EQ(a.best_params.angles(), b.best_params.angles());
  double last = -1.0;
  for (std::size_t budget : {50u, 100u, 200u, 400u, 800u}) {
    const auto r = maximize_fw(in, w, triangular_layout(3), small(9, budget));
    EXPECT_GE(r.best_fw, last);
    last = r.best_fw;
  }
}

TEST(MaximizeFw, Errors) {
  const std::vector<SingleModeState> in = {SingleModeState::fock(1), SingleModeState::fock(1)};
  EXPECT_THROW(maximize_fw(in, WeightVector({1.0}), triangular_layout(3), small(1)), DimensionError);
  EXPECT_THROW(maximize_fw(in, WeightVector({1.0}), triangular_layout(2), small(1, 0)), ValidationError);
}

TEST(ScalingStudy, WellDistributedStaysUnderClosedForm) {
  const auto rows = scaling_study(ScalingFamily::kWellDistributed, 1, 3, 1, small(5, 2000, 4));
  for (const auto& r : rows) {
    EXPECT_LE(r.best_fw, r.closed_form + 1e-9) << "d=" << r.d;
    EXPECT_EQ(r.violations, 0u);
  }
}

TEST(ScalingStudy, HoardedReachesOptimum) {
  const auto rows = scaling_study(ScalingFamily::kHoarded, 1, 3, 1, small(5, 2000, 4));
  for (const auto& r : rows) {
    EXPECT_NEAR(r.best_fw, 2.0 * (r.d + 1.0) / r.d, 1e-6) << "d=" << r.d;
    EXPECT_LE(r.implied_delta_q / r.fock_delta_q, 2.1);
  }
}

}  // namespace
}  // namespace distmet
