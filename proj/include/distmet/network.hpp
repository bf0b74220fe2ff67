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

// Mode-space unitaries and their realization as meshes of two-mode gates.
//
// Convention: a network U maps input creation operators as
//   a_k† -> Σ_j U_jk a_j†,
// so column k of U is where a photon entering port k goes. A GateSequence is
// applied first-to-last; its matrix is G_last ··· G_first.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/random.hpp"
#include "distmet/weights.hpp"

namespace distmet {

inline constexpr double kUnitarityTolerance = 1e-10;
inline constexpr double kRecompositionTolerance = 1e-8;

inline double unitarity_deviation(const Eigen::MatrixXcd& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

class ModeUnitary {
 public:
  explicit ModeUnitary(Eigen::MatrixXcd entries, double tolerance = kUnitarityTolerance)
      : u_(std::move(entries)) {
    if (u_.rows() == 0 || u_.rows() != u_.cols()) throw ValidationError("mode unitary must be square and non-empty");
    if (!u_.allFinite()) throw ValidationError("mode unitary has non-finite entries");
    const double dev = unitarity_deviation(u_);
    if (dev > tolerance) {
      throw ValidationError("matrix is not unitary (max |U†U - I| = " + std::to_string(dev) + ")");
    }
  }

  static ModeUnitary identity(int dim) { return ModeUnitary(Eigen::MatrixXcd::Identity(dim, dim)); }

  /// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
  static ModeUnitary haar(int dim, Rng& rng) {
    Eigen::MatrixXcd z(dim, dim);
    for (int c = 0; c < dim; ++c) {
      for (int r = 0; r < dim; ++r) z(r, c) = rng.complex_normal() / std::numbers::sqrt2;
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; ++k) {
      const auto d = r(k, k);
      if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
    }
    return ModeUnitary(std::move(q));
  }

  int dim() const { return static_cast<int>(u_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return u_; }
  Amplitude operator()(int r, int c) const { return u_(r, c); }

  ModeUnitary adjoint() const { return ModeUnitary(u_.adjoint(), 1e-8); }

  friend ModeUnitary operator*(const ModeUnitary& a, const ModeUnitary& b) {
    if (a.dim() != b.dim()) throw DimensionError("cannot compose unitaries of different dimension");
    return ModeUnitary(a.u_ * b.u_, 1e-8);
  }

 private:
  Eigen::MatrixXcd u_;
};

struct BeamSplitterGate {
  int i = 0;
  int j = 1;
  double transmissivity = 1.0;
  double phase = 0.0;
};

/// exp(-i theta n_mode).
struct PhaseGate {
  int mode = 0;
  double theta = 0.0;
};

using Gate = std::variant<BeamSplitterGate, PhaseGate>;

class GateSequence {
 public:
  explicit GateSequence(int modes, std::vector<Gate> gates = {}) : modes_(modes), gates_(std::move(gates)) {
    if (modes < 1) throw ValidationError("gate sequence needs at least one mode");
    for (const auto& g : gates_) validate(g);
  }

  int modes() const { return modes_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  void push_back(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
  }

  std::size_t beam_splitter_count() const {
    std::size_t n = 0;
    for (const auto& g : gates_) n += std::holds_alternative<BeamSplitterGate>(g) ? 1 : 0;
    return n;
  }

 private:
  void validate(const Gate& g) const {
    const auto in_range = [this](int k) { return k >= 0 && k < modes_; };
    if (const auto* bs = std::get_if<BeamSplitterGate>(&g)) {
      if (!in_range(bs->i) || !in_range(bs->j) || bs->i == bs->j) {
        throw ValidationError("beam splitter needs two distinct valid modes");
      }
      if (!(bs->transmissivity >= 0.0 && bs->transmissivity <= 1.0)) {
        throw ValidationError("transmissivity must lie in [0, 1]");
      }
      if (!std::isfinite(bs->phase)) throw ValidationError("beam splitter phase must be finite");
    } else {
      const auto& ph = std::get<PhaseGate>(g);
      if (!in_range(ph.mode)) throw ValidationError("phase gate mode out of range");
      if (!std::isfinite(ph.theta)) throw ValidationError("phase must be finite");
    }
  }

  int modes_;
  std::vector<Gate> gates_;
};

inline double wrap_angle(double x) {
  x = std::remainder(x, 2.0 * std::numbers::pi);
  return x <= -std::numbers::pi ? x + 2.0 * std::numbers::pi : x;
}

/// The M x M mode matrix of a single gate.
inline Eigen::MatrixXcd gate_matrix(const Gate& gate, int modes) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(modes, modes);
  if (const auto* bs = std::get_if<BeamSplitterGate>(&gate)) {
    const auto b = beam_splitter_matrix(bs->transmissivity, bs->phase);
    g(bs->i, bs->i) = b(0, 0);
    g(bs->i, bs->j) = b(0, 1);
    g(bs->j, bs->i) = b(1, 0);
    g(bs->j, bs->j) = b(1, 1);
  } else {
    const auto& ph = std::get<PhaseGate>(gate);
    g(ph.mode, ph.mode) = std::polar(1.0, -ph.theta);
  }
  return g;
}

inline Eigen::MatrixXcd recompose(const GateSequence& seq) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(seq.modes(), seq.modes());
  for (const auto& g : seq.gates()) u = gate_matrix(g, seq.modes()) * u;
  return u;
}

inline Gate inverse_gate(const Gate& gate) {
  if (const auto* bs = std::get_if<BeamSplitterGate>(&gate)) {
    return BeamSplitterGate{bs->i, bs->j, bs->transmissivity, wrap_angle(bs->phase + std::numbers::pi)};
  }
  const auto& ph = std::get<PhaseGate>(gate);
  return PhaseGate{ph.mode, -ph.theta};
}

inline GateSequence inverse(const GateSequence& seq) {
  std::vector<Gate> gates;
  gates.reserve(seq.size());
  for (auto it = seq.gates().rbegin(); it != seq.gates().rend(); ++it) gates.push_back(inverse_gate(*it));
  return GateSequence(seq.modes(), std::move(gates));
}

struct DecomposeOptions {
  /// Emit every mesh position (identity splitters and zero phases included),
  /// so the result always has the triangular layout of triangular_layout().
  bool keep_trivial_gates = false;
};

/// Triangular (Reck-style) elimination. Entries of row r = M-1, ..., 1 are
/// nulled left to right by splitters on adjacent columns (c, c+1), applied on
/// the right; what remains is a diagonal of output phases. Produces at most
/// M(M-1)/2 splitters followed by at most M phase gates.
inline GateSequence decompose(const ModeUnitary& unitary, DecomposeOptions options = {}) {
  const int m = unitary.dim();
  Eigen::MatrixXcd work = unitary.matrix();
  std::vector<Gate> gates;
  for (int r = m - 1; r >= 1; --r) {
    for (int c = 0; c < r; ++c) {
      const Amplitude x = work(r, c);
      const Amplitude y = work(r, c + 1);
      if (std::abs(x) < 1e-14) {
        work(r, c) = 0.0;
        if (options.keep_trivial_gates) gates.emplace_back(BeamSplitterGate{c, c + 1, 1.0, 0.0});
        continue;
      }
      const double t = std::norm(y) / (std::norm(x) + std::norm(y));
      const double phi = std::arg(x) - std::arg(y);
      const auto b = beam_splitter_matrix(t, phi);
      const Eigen::VectorXcd col_c = work.col(c);
      const Eigen::VectorXcd col_d = work.col(c + 1);
      work.col(c) = col_c * b(0, 0) + col_d * b(1, 0);
      work.col(c + 1) = col_c * b(0, 1) + col_d * b(1, 1);
      work(r, c) = 0.0;
      // the sequence stores the inverse of each right-multiplied eliminator
      gates.emplace_back(BeamSplitterGate{c, c + 1, t, wrap_angle(phi + std::numbers::pi)});
    }
  }
  for (int k = 0; k < m; ++k) {
    const double theta = -std::arg(work(k, k));
    if (options.keep_trivial_gates || std::abs(theta) > 1e-15) gates.emplace_back(PhaseGate{k, theta});
  }
  GateSequence seq(m, std::move(gates));
  const double err = (recompose(seq) - unitary.matrix()).cwiseAbs().maxCoeff();
  if (err > kRecompositionTolerance) {
    throw ValidationError("mesh decomposition failed to reproduce the unitary (error " + std::to_string(err) + ")");
  }
  return seq;
}

/// Gate positions of the triangular mesh produced by decompose(), with
/// identity parameters.
inline GateSequence triangular_layout(int modes) {
  std::vector<Gate> gates;
  for (int r = modes - 1; r >= 1; --r) {
    for (int c = 0; c < r; ++c) gates.emplace_back(BeamSplitterGate{c, c + 1, 1.0, 0.0});
  }
  for (int k = 0; k < modes; ++k) gates.emplace_back(PhaseGate{k, 0.0});
  return GateSequence(modes, std::move(gates));
}

inline FockState apply_gates(const FockState& state, const GateSequence& seq) {
  if (state.mode_count() != seq.modes()) throw DimensionError("gate sequence and state have different mode counts");
  FockState out = state;
  for (const auto& g : seq.gates()) {
    if (const auto* bs = std::get_if<BeamSplitterGate>(&g)) {
      out = apply_beam_splitter(out, bs->i, bs->j, bs->transmissivity, bs->phase);
    } else {
      const auto& ph = std::get<PhaseGate>(g);
      out = apply_phase_shift(out, ph.mode, ph.theta);
    }
  }
  return out;
}

/// |Ψ_U> = U|Ψ>, realized through the triangular mesh of U.
inline FockState apply_mode_unitary(const FockState& state, const ModeUnitary& unitary) {
  if (state.mode_count() != unitary.dim()) {
    throw DimensionError("unitary dimension " + std::to_string(unitary.dim()) + " does not match " +
                         std::to_string(state.mode_count()) + " modes");
  }
  return apply_gates(state, decompose(unitary));
}

/// Weight-encoding network for the twin-Fock scheme on 2d modes (phase modes
/// 0..d-1, reference modes d..2d-1). With c_i = |w_i| / (2‖w‖₁):
///
///   U(i,0) = U(i+d,0) = √c_i,   U(i,1) = -U(i+d,1) = sign(w_i) √c_i.
///
/// For equal-magnitude weights (‖w‖₁ = 1) these are exactly
/// √(|w_i|/2) and w_i/√(2|w_i|). Zero weights leave their port pair out of
/// the first two columns. The remaining columns are the standard basis
/// orthonormalized against the first two, in index order.
inline ModeUnitary hoarding_unitary(const WeightVector& w) {
  const int d = w.d();
  const int m = 2 * d;
  const double l1 = w.l1_norm();
  if (!(l1 > 0.0)) throw ValidationError("hoarding unitary needs a non-zero weight vector");
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 0; i < d; ++i) {
    const double wi = w[i];
    const double amp = std::sqrt(std::abs(wi) / (2.0 * l1));
    const double sign = wi > 0.0 ? 1.0 : (wi < 0.0 ? -1.0 : 0.0);
    u(i, 0) = amp;
    u(i + d, 0) = amp;
    u(i, 1) = sign * amp;
    u(i + d, 1) = -sign * amp;
  }
  int filled = 2;
  for (int k = 0; k < m && filled < m; ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(m, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < filled; ++c) v -= u.col(c) * u.col(c).dot(v);
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    u.col(filled++) = v / norm;
  }
  return ModeUnitary(std::move(u));
}

/// Three-mode single-reference-port circuit for q = w1 θ1 + w2 θ2 with the
/// phases on modes 0 and 1 and the reference on mode 2: a 50:50 splitter on
/// the input pair, a full reflector routing the antisymmetric mode into the
/// reference port, then a w1:w2 splitter on the phase modes.
struct Fig2Network {
  GateSequence circuit;
  FockState input;
};

inline Fig2Network fig2_network(int n, double w1, double w2) {
  if (n < 0) throw ValidationError("photon number must be non-negative");
  if (!(w1 > 0.0 && w2 > 0.0)) throw ValidationError("both weights must be positive");
  if (std::abs(std::max(w1, w2) - 0.5) > 1e-12) throw ValidationError("weights must satisfy max(w1, w2) = 1/2");
  GateSequence circuit(3, {BeamSplitterGate{0, 1, 0.5, 0.0}, BeamSplitterGate{1, 2, 0.0, 0.0},
                           BeamSplitterGate{0, 1, w1 / (w1 + w2), 0.0}});
  return {std::move(circuit), FockState::basis({n, n, 0})};
}

}  // namespace distmet
