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

// End-to-end estimation strategies: prepare, spread through a network,
// imprint phases, undo the network, project onto the input.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/network.hpp"
#include "distmet/qfi.hpp"
#include "distmet/weights.hpp"

namespace distmet {

inline constexpr double kDefaultProbe = 1e-3;
inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kInsensitiveDerivative = 1e-12;

using PhaseVector = std::vector<double>;

struct ProtocolMetadata {
  std::string scheme;
  int d = 0;
  int photons = 0;
  int modes = 0;
  std::vector<double> weights;
  PhaseVector theta;  // phases at q_eval
  double step = 0.0;
};

struct ProtocolResult {
  double expected_O = 0.0;
  double delta_q = 0.0;
  double q_eval = 0.0;
  double derivative_estimate = 0.0;
  ProtocolMetadata metadata;
};

/// ⟨Ô⟩ and ⟨Ô²⟩ at a given q.
struct Expectation {
  double first = 0.0;
  double second = 0.0;
};

struct Propagated {
  double delta_q = 0.0;
  double derivative = 0.0;
  Expectation at_q;
};

inline Propagated error_propagation(const std::function<Expectation(double)>& expectation, double q, double step) {
  if (!(step > 0.0)) throw ValidationError("finite-difference step must be positive");
  const double derivative = (expectation(q + step).first - expectation(q - step).first) / (2.0 * step);
  if (std::abs(derivative) < kInsensitiveDerivative) {
    throw InsensitivePoint("d<O>/dq vanishes at q = " + std::to_string(q) + "; probe at a small non-zero q");
  }
  const Expectation e = expectation(q);
  const double var = std::max(0.0, e.second - e.first * e.first);
  return {std::sqrt(var) / std::abs(derivative), derivative, e};
}

/// θ(q) = q · direction / (w · direction), so that w · θ = q. The default
/// direction is w itself.
inline PhaseVector allocate_phases(const WeightVector& w, double q, const std::optional<PhaseVector>& direction = {}) {
  PhaseVector dir = direction ? *direction : PhaseVector(w.values().begin(), w.values().end());
  if (static_cast<int>(dir.size()) != w.d()) throw DimensionError("phase direction length must equal d");
  double dot = 0.0;
  for (int j = 0; j < w.d(); ++j) dot += w[j] * dir[static_cast<std::size_t>(j)];
  if (std::abs(dot) < 1e-15) throw ValidationError("phase direction is orthogonal to w");
  for (double& x : dir) x *= q / dot;
  return dir;
}

/// Input, forward network and phase placement of an interferometric scheme.
/// The measurement undoes the forward network and projects onto the input.
class Interferometer {
 public:
  Interferometer(FockState input, GateSequence forward, std::vector<int> phase_modes, WeightVector w,
                 std::optional<PhaseVector> direction = {})
      : input_(std::move(input)),
        forward_(std::move(forward)),
        backward_(inverse(forward_)),
        phase_modes_(std::move(phase_modes)),
        w_(std::move(w)),
        direction_(std::move(direction)),
        spread_(prepare()) {}

  const FockState& input() const { return input_; }
  /// |Ψ_U⟩, the state on which the phases act.
  const FockState& spread_state() const { return spread_; }
  const std::vector<int>& phase_modes() const { return phase_modes_; }
  const WeightVector& weights() const { return w_; }

  PhaseVector phases(double q) const { return allocate_phases(w_, q, direction_); }

  /// Projector measurement, so ⟨Ô²⟩ = ⟨Ô⟩.
  Expectation expectation(double q) const {
    FockState s = spread_;
    const PhaseVector theta = phases(q);
    for (std::size_t j = 0; j < phase_modes_.size(); ++j) s = apply_phase_shift(s, phase_modes_[j], theta[j]);
    s = apply_gates(s, backward_);
    const double o = fidelity_projector(s, input_);
    return {o, o};
  }

  ProtocolResult run(double q_probe, double step, ProtocolMetadata metadata) const {
    const auto p = error_propagation([this](double q) { return expectation(q); }, q_probe, step);
    metadata.modes = input_.mode_count();
    metadata.weights.assign(w_.values().begin(), w_.values().end());
    metadata.theta = phases(q_probe);
    metadata.step = step;
    return {p.at_q.first, p.delta_q, q_probe, p.derivative, std::move(metadata)};
  }

 private:
  FockState input_;
  GateSequence forward_;
  GateSequence backward_;
  std::vector<int> phase_modes_;
  WeightVector w_;
  std::optional<PhaseVector> direction_;
  FockState spread_;

  FockState prepare() const {
    if (forward_.modes() != input_.mode_count()) throw DimensionError("network and input disagree on mode count");
    if (static_cast<int>(phase_modes_.size()) != w_.d()) throw DimensionError("one phase mode per weight required");
    detail::check_phase_modes(phase_modes_, input_.mode_count());
    return apply_gates(input_, forward_);
  }
};

/// |N/2, N/2, 0, ...⟩ on 2d modes through the hoarding unitary, phases on
/// modes 0..d-1.
inline Interferometer twin_fock_interferometer(int d, int photons, const WeightVector& w,
                                               std::optional<PhaseVector> direction = {},
                                               std::optional<int> cap = std::nullopt) {
  if (d < 1) throw ValidationError("d must be positive");
  if (w.d() != d) throw DimensionError("weight vector length must equal d");
  if (photons < 2 || photons % 2 != 0) throw ValidationError("N must be even and positive");
  if (cap && *cap < photons) {
    throw DimensionError("photon cap " + std::to_string(*cap) + " below N = " + std::to_string(photons), photons);
  }
  Occupation occ(static_cast<std::size_t>(2 * d), 0);
  occ[0] = photons / 2;
  occ[1] = photons / 2;
  FockState input = FockState::basis(std::move(occ), cap.value_or(photons));
  return Interferometer(std::move(input), decompose(hoarding_unitary(w)), default_phase_modes(d), w,
                        std::move(direction));
}

inline ProtocolResult twin_fock_protocol(int d, int photons, const WeightVector& w, double q_probe = kDefaultProbe,
                                         double step = kDefaultStep, std::optional<PhaseVector> direction = {},
                                         std::optional<int> cap = std::nullopt) {
  const auto net = twin_fock_interferometer(d, photons, w, std::move(direction), cap);
  ProtocolMetadata meta;
  meta.scheme = "twin-fock";
  meta.d = d;
  meta.photons = photons;
  return net.run(q_probe, step, std::move(meta));
}

inline Interferometer fig2_interferometer(int n, double w1, double w2) {
  auto net = fig2_network(n, w1, w2);
  return Interferometer(std::move(net.input), std::move(net.circuit), {0, 1}, WeightVector({w1, w2}));
}

inline ProtocolResult fig2_protocol(int n, double w1, double w2, double q_probe = kDefaultProbe,
                                    double step = kDefaultStep) {
  if (n < 1) throw ValidationError("n must be positive");
  const auto net = fig2_interferometer(n, w1, w2);
  ProtocolMetadata meta;
  meta.scheme = "fig2";
  meta.d = 2;
  meta.photons = 2 * n;
  return net.run(q_probe, step, std::move(meta));
}

/// Per-node twin-Fock sensitivity 1/√(2(n/2)(n/2+1)) for n photons.
inline double twin_fock_node_sensitivity(int n) {
  if (n < 2 || n % 2 != 0) throw ValidationError("n must be even and positive");
  const double h = n / 2.0;
  return 1.0 / std::sqrt(2.0 * h * (h + 1.0));
}

/// Each node estimates its own phase with n photons; Δq = √(Σ w_j² Δθ_j²).
inline double classical_baseline(int n, const WeightVector& w) {
  return std::sqrt(w.norm_squared()) * twin_fock_node_sensitivity(n);
}

/// 2/√(2N(N+2)).
inline double twin_fock_formula(int photons) {
  if (photons < 1) throw ValidationError("N must be positive");
  return 2.0 / std::sqrt(2.0 * photons * (photons + 2.0));
}

/// 1/√(2n(n+1)).
inline double fig2_formula(int n) {
  if (n < 1) throw ValidationError("n must be positive");
  return 1.0 / std::sqrt(2.0 * n * (n + 1.0));
}

}  // namespace distmet
