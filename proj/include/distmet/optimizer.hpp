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

#pragma once

// Multi-start simplex search for the unitary maximizing F_w at a fixed
// product input.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "distmet/bounds.hpp"
#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/nelder_mead.hpp"
#include "distmet/network.hpp"
#include "distmet/parallel.hpp"
#include "distmet/qfi.hpp"
#include "distmet/random.hpp"
#include "distmet/weights.hpp"

namespace distmet {

/// Free parameters of a gate skeleton: (a, φ) with t = cos²a for every
/// splitter, θ for every phase gate, in gate order.
class MeshParameters {
 public:
  MeshParameters(GateSequence layout, std::vector<double> angles)
      : layout_(std::move(layout)), angles_(std::move(angles)) {
    if (angles_.size() != parameter_count(layout_)) {
      throw DimensionError("mesh needs " + std::to_string(parameter_count(layout_)) + " angles, got " +
                           std::to_string(angles_.size()));
    }
    for (double a : angles_) {
      if (!std::isfinite(a)) throw ValidationError("mesh angles must be finite");
    }
  }

  static std::size_t parameter_count(const GateSequence& layout) {
    return layout.size() + layout.beam_splitter_count();
  }

  /// Reads the parameters of a concrete sequence, which becomes the layout.
  static MeshParameters from_sequence(const GateSequence& seq) {
    std::vector<double> angles;
    for (const auto& g : seq.gates()) {
      if (const auto* bs = std::get_if<BeamSplitterGate>(&g)) {
        angles.push_back(std::acos(std::sqrt(std::clamp(bs->transmissivity, 0.0, 1.0))));
        angles.push_back(bs->phase);
      } else {
        angles.push_back(std::get<PhaseGate>(g).theta);
      }
    }
    return MeshParameters(seq, std::move(angles));
  }

  const GateSequence& layout() const { return layout_; }
  const std::vector<double>& angles() const { return angles_; }

  GateSequence sequence() const { return realize(layout_, angles_); }

  static GateSequence realize(const GateSequence& layout, const std::vector<double>& angles) {
    std::vector<Gate> gates;
    gates.reserve(layout.size());
    std::size_t k = 0;
    for (const auto& g : layout.gates()) {
      if (const auto* bs = std::get_if<BeamSplitterGate>(&g)) {
        const double c = std::cos(angles[k]);
        gates.emplace_back(BeamSplitterGate{bs->i, bs->j, std::min(1.0, c * c), wrap_angle(angles[k + 1])});
        k += 2;
      } else {
        gates.emplace_back(PhaseGate{std::get<PhaseGate>(g).mode, wrap_angle(angles[k++])});
      }
    }
    return GateSequence(layout.modes(), std::move(gates));
  }

 private:
  GateSequence layout_;
  std::vector<double> angles_;
};

struct OptimizerOptions {
  /// Objective evaluations per restart.
  std::size_t budget = 4000;
  int restarts = 20;
  std::uint64_t seed = 0;
  double diameter_tolerance = 1e-8;
  /// Restart 0 starts here instead of at random angles.
  std::optional<std::vector<double>> warm_start;
  std::vector<int> phase_modes;  // empty: modes 0..d-1
};

struct OptimizationReport {
  double best_fw = 0.0;
  MeshParameters best_params;
  double bound_value = 0.0;
  std::string bound_kind;
  double gap = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  std::uint64_t seed = 0;
  int best_restart = 0;
  /// Evaluations that exceeded the bound by more than 1e-9.
  std::size_t violations = 0;
};

/// Applicable cap on F_w: the Fock eigenvalue bound when every input is a
/// number state, the separable bound otherwise.
inline std::pair<double, std::string> applicable_fw_bound(std::span<const SingleModeState> input,
                                                          const WeightVector& w) {
  std::vector<int> n;
  for (const auto& s : input) {
    const auto k = s.number_state();
    if (!k) break;
    n.push_back(*k);
  }
  if (n.size() == input.size()) return {fock_eigenvalue_bound(n, w).value, "fock"};
  std::vector<MomentSet> moments;
  for (const auto& s : input) moments.push_back(single_mode_moments(s));
  return {separable_fw_bound(separable_bound_constants(moments), w), "separable"};
}

inline OptimizationReport maximize_fw(std::span<const SingleModeState> input, const WeightVector& w,
                                      const GateSequence& layout, const OptimizerOptions& opts = {}) {
  if (opts.budget == 0) throw ValidationError("budget must be at least 1");
  if (opts.restarts < 1) throw ValidationError("need at least one restart");
  if (static_cast<int>(input.size()) != layout.modes()) {
    throw DimensionError("layout has " + std::to_string(layout.modes()) + " modes but the input has " +
                         std::to_string(input.size()));
  }
  const std::vector<int> phase_modes = opts.phase_modes.empty() ? default_phase_modes(w.d()) : opts.phase_modes;
  if (static_cast<int>(phase_modes.size()) != w.d()) throw DimensionError("one phase mode per weight required");
  detail::check_phase_modes(phase_modes, layout.modes());

  std::vector<MomentSet> moments;
  for (const auto& s : input) moments.push_back(single_mode_moments(s));
  const auto [bound, kind] = applicable_fw_bound(input, w);
  const double limit = bound + kBoundSlack * std::max(1.0, bound);
  const std::size_t dim = MeshParameters::parameter_count(layout);
  if (opts.warm_start && opts.warm_start->size() != dim) throw DimensionError("warm start has the wrong length");

  struct Outcome {
    NelderMeadResult nm;
    std::size_t violations = 0;
  };
  std::vector<Outcome> runs(static_cast<std::size_t>(opts.restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    std::vector<double> x0;
    if (r == 0 && opts.warm_start) {
      x0 = *opts.warm_start;
    } else {
      Rng rng(instance_seed(opts.seed, r));
      x0.resize(dim);
      for (double& a : x0) a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    std::size_t violations = 0;
    const auto objective = [&](const std::vector<double>& x) {
      const ModeUnitary u(recompose(MeshParameters::realize(layout, x)), 1e-8);
      const double fw = qfi_from_moments(u, moments, phase_modes, w);
      if (fw > limit) ++violations;
      return -fw;
    };
    NelderMeadOptions nm;
    nm.max_evaluations = opts.budget;
    nm.diameter_tolerance = opts.diameter_tolerance;
    runs[r] = {nelder_mead(objective, std::move(x0), nm), violations};
  });

  int best = 0;
  std::size_t iterations = 0, evaluations = 0, violations = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    const auto& o = runs[static_cast<std::size_t>(r)];
    iterations += o.nm.iterations;
    evaluations += o.nm.evaluations;
    violations += o.violations;
    // strict comparison keeps the lowest restart index on ties
    if (o.nm.value < runs[static_cast<std::size_t>(best)].nm.value) best = r;
  }
  std::vector<double> angles = runs[static_cast<std::size_t>(best)].nm.x;
  for (double& a : angles) a = wrap_angle(a);
  const double best_fw = -runs[static_cast<std::size_t>(best)].nm.value;
  return OptimizationReport{best_fw,
                            MeshParameters(layout, std::move(angles)),
                            bound,
                            kind,
                            bound - best_fw,
                            iterations,
                            evaluations,
                            opts.seed,
                            best,
                            violations};
}

/// Angles on the triangular layout reproducing the hoarding unitary.
inline std::vector<double> hoarding_warm_start(const WeightVector& w) {
  DecomposeOptions keep;
  keep.keep_trivial_gates = true;
  return MeshParameters::from_sequence(decompose(hoarding_unitary(w), keep)).angles();
}

enum class ScalingFamily { kWellDistributed, kHoarded };

inline std::string to_string(ScalingFamily f) {
  return f == ScalingFamily::kWellDistributed ? "well-distributed" : "hoarded";
}

struct ScalingRow {
  ScalingFamily family{};
  int d = 0;
  int photons = 0;
  double best_fw = 0.0;
  double bound = 0.0;         // applicable Fock eigenvalue bound
  double closed_form = 0.0;   // 4|n|²/d²
  double witness_fw = 0.0;    // F_w of the hoarding unitary on this input
  double implied_delta_q = 0.0;  // |w|²/√best_fw
  double fock_delta_q = 0.0;      // d|w|²/(2|n|)
  std::size_t violations = 0;
};

/// Fock input on 2d modes with uniform weights on modes 0..d-1:
/// well-distributed puts `per_node` photons on each phase mode, hoarded puts
/// d·per_node photons on each of modes 0 and 1.
inline std::vector<int> scaling_input(ScalingFamily family, int d, int per_node) {
  if (d < 1 || per_node < 1) throw ValidationError("d and photons per node must be positive");
  std::vector<int> n(static_cast<std::size_t>(2 * d), 0);
  if (family == ScalingFamily::kWellDistributed) {
    for (int j = 0; j < d; ++j) n[static_cast<std::size_t>(j)] = per_node;
  } else {
    n[0] = d * per_node;
    n[1] = d * per_node;
  }
  return n;
}

inline ScalingRow scaling_point(ScalingFamily family, int d, int per_node, const OptimizerOptions& base) {
  const std::vector<int> n = scaling_input(family, d, per_node);
  std::vector<SingleModeState> input;
  for (int k : n) input.push_back(SingleModeState::fock(k));
  const WeightVector w = WeightVector::uniform(d);
  const GateSequence layout = triangular_layout(2 * d);

  std::vector<MomentSet> moments;
  for (const auto& s : input) moments.push_back(single_mode_moments(s));
  const double witness = qfi_from_moments(hoarding_unitary(w), moments, w);

  OptimizerOptions opts = base;
  opts.warm_start = hoarding_warm_start(w);
  const auto report = maximize_fw(input, w, layout, opts);

  ScalingRow row;
  row.family = family;
  row.d = d;
  row.photons = std::accumulate(n.begin(), n.end(), 0);
  row.best_fw = report.best_fw;
  const auto eb = fock_eigenvalue_bound(n, w);
  row.bound = eb.value;
  row.closed_form = eb.closed_form;
  row.witness_fw = witness;
  row.implied_delta_q = report.best_fw > 0.0 ? crb_cauchy_schwarz(report.best_fw, w)
                                             : std::numeric_limits<double>::infinity();
  row.fock_delta_q = fock_delta_q_bound(n, w);
  row.violations = report.violations;
  return row;
}

inline std::vector<ScalingRow> scaling_study(ScalingFamily family, int d_min, int d_max, int per_node,
                                             const OptimizerOptions& opts) {
  if (d_min < 1 || d_max < d_min) throw ValidationError("invalid d range");
  std::vector<ScalingRow> rows;
  for (int d = d_min; d <= d_max; ++d) rows.push_back(scaling_point(family, d, per_node, opts));
  return rows;
}

}  // namespace distmet
