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

// Multi-mode bosonic states in a truncated Fock space.
//
// A FockState is a sparse amplitude table over occupation vectors, kept in
// canonical form: entries sorted lexicographically by occupation, no
// duplicates, and no amplitude of magnitude below kPruneThreshold. Passive
// gates conserve the photon number of every basis vector, so the total-photon
// cap never causes truncation once a state has been built.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "distmet/error.hpp"

namespace distmet {

using Amplitude = std::complex<double>;
using Occupation = std::vector<int>;

inline constexpr double kPruneThreshold = 1e-15;
inline constexpr double kNormTolerance = 1e-12;

namespace detail {

struct OccupationHash {
  std::size_t operator()(const Occupation& occ) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (int k : occ) {
      h ^= static_cast<std::size_t>(k) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline Amplitude ipow(Amplitude base, int exponent) {
  Amplitude result{1.0, 0.0};
  for (int e = 0; e < exponent; ++e) result *= base;
  return result;
}

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double binomial(int n, int k) {
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

}  // namespace detail

/// Pure state of one mode on |0>, ..., |cutoff>.
class SingleModeState {
 public:
  explicit SingleModeState(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw ValidationError("single-mode state needs at least one amplitude");
    double norm = 0.0;
    for (const auto& a : amps_) {
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw ValidationError("single-mode amplitude is not finite");
      }
      norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > kNormTolerance) {
      throw ValidationError("single-mode state is not normalized (norm^2 = " + std::to_string(norm) + ")");
    }
  }

  static SingleModeState fock(int n) {
    if (n < 0) throw ValidationError("photon number must be non-negative");
    std::vector<Amplitude> amps(static_cast<std::size_t>(n) + 1, 0.0);
    amps.back() = 1.0;
    return SingleModeState(std::move(amps));
  }

  static SingleModeState vacuum() { return fock(0); }

  int cutoff() const { return static_cast<int>(amps_.size()) - 1; }

  std::span<const Amplitude> amplitudes() const { return amps_; }

  Amplitude amplitude(int k) const {
    return (k >= 0 && k <= cutoff()) ? amps_[static_cast<std::size_t>(k)] : Amplitude{};
  }

  /// Highest level carrying an amplitude above the pruning threshold.
  int max_occupied() const {
    for (int k = cutoff(); k >= 0; --k) {
      if (std::abs(amps_[static_cast<std::size_t>(k)]) >= kPruneThreshold) return k;
    }
    return 0;
  }

  /// The number state |k>, if this is one (up to a global phase).
  std::optional<int> number_state() const {
    std::optional<int> level;
    for (int k = 0; k <= cutoff(); ++k) {
      if (std::abs(amps_[static_cast<std::size_t>(k)]) < kPruneThreshold) continue;
      if (level) return std::nullopt;
      level = k;
    }
    return level;
  }

 private:
  std::vector<Amplitude> amps_;
};

/// A single-mode state cut at a finite level, with the norm that was dropped.
struct TruncatedState {
  SingleModeState state;
  double discarded_norm;  // squared norm of the removed tail, before renormalizing
};

/// Keeps levels 0..cutoff of an arbitrary (possibly unnormalized) amplitude
/// list whose total squared norm is `full_norm`, then renormalizes.
inline TruncatedState truncate(std::span<const Amplitude> amplitudes, int cutoff,
                               std::optional<double> full_norm = std::nullopt) {
  if (cutoff < 0) throw ValidationError("cutoff must be non-negative");
  std::vector<Amplitude> kept(static_cast<std::size_t>(cutoff) + 1, 0.0);
  double total = 0.0;
  double retained = 0.0;
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    total += std::norm(amplitudes[k]);
    if (k < kept.size()) {
      kept[k] = amplitudes[k];
      retained += std::norm(amplitudes[k]);
    }
  }
  if (full_norm) total = *full_norm;
  if (retained <= 0.0) throw ValidationError("truncation removed the whole state");
  const double scale = 1.0 / std::sqrt(retained);
  for (auto& a : kept) a *= scale;
  return {SingleModeState(std::move(kept)), std::max(0.0, total - retained)};
}

/// Coherent state |alpha> cut at `cutoff` photons and renormalized.
inline TruncatedState coherent_state(Amplitude alpha, int cutoff) {
  if (cutoff < 0) throw ValidationError("cutoff must be non-negative");
  std::vector<Amplitude> amps(static_cast<std::size_t>(cutoff) + 1);
  const double prefactor = std::exp(-0.5 * std::norm(alpha));
  for (int k = 0; k <= cutoff; ++k) {
    amps[static_cast<std::size_t>(k)] =
        prefactor * detail::ipow(alpha, k) / std::exp(0.5 * detail::log_factorial(k));
  }
  return truncate(amps, cutoff, 1.0);
}

/// Single-mode moments <a>, <a†a>, <a²>, <a†aa>, <(a†a)²> and the number variance.
struct MomentSet {
  Amplitude alpha{};
  double nbar = 0.0;
  Amplitude xi{};
  Amplitude beta{};
  double m = 0.0;
  double v = 0.0;

  /// Checks the Cauchy-Schwarz chain |α|² ≤ n̄ ≤ √m, |ξ| ≤ √m, |β| ≤ √(m n̄), v ≥ 0.
  void validate(double slack = 1e-12) const {
    const auto fail = [](const char* what) { throw ValidationError(std::string("moment set violates ") + what); };
    if (nbar < -slack || m < -slack) fail("non-negativity");
    if (std::norm(alpha) > nbar + slack) fail("|alpha|^2 <= nbar");
    if (nbar > std::sqrt(std::max(m, 0.0)) + slack) fail("nbar <= sqrt(m)");
    if (std::abs(xi) > std::sqrt(std::max(m, 0.0)) + slack) fail("|xi| <= sqrt(m)");
    if (std::abs(beta) > std::sqrt(std::max(m * nbar, 0.0)) + slack) fail("|beta| <= sqrt(m nbar)");
    if (v < -slack) fail("v >= 0");
  }

  bool is_fock_like(double tol = 1e-12) const {
    return std::abs(alpha) <= tol && std::abs(xi) <= tol && std::abs(beta) <= tol && std::abs(v) <= tol;
  }
};

inline MomentSet single_mode_moments(const SingleModeState& state) {
  const auto c = state.amplitudes();
  const int top = state.cutoff();
  MomentSet out;
  for (int k = 0; k <= top; ++k) {
    const auto ck = c[static_cast<std::size_t>(k)];
    const double p = std::norm(ck);
    out.nbar += k * p;
    out.m += static_cast<double>(k) * k * p;
    if (k + 1 <= top) {
      const auto a_c = std::sqrt(static_cast<double>(k + 1)) * c[static_cast<std::size_t>(k + 1)];
      out.alpha += std::conj(ck) * a_c;
      out.beta += std::conj(ck) * static_cast<double>(k) * a_c;
    }
    if (k + 2 <= top) {
      out.xi += std::conj(ck) * std::sqrt(static_cast<double>((k + 1) * (k + 2))) *
                c[static_cast<std::size_t>(k + 2)];
    }
  }
  out.v = out.m - out.nbar * out.nbar;
  if (out.v < 0.0 && out.v > -1e-12) out.v = 0.0;
  return out;
}

class FockState {
 public:
  using Entry = std::pair<Occupation, Amplitude>;

  /// Builds a canonical state; duplicates are summed, tiny amplitudes pruned,
  /// and the result must be normalized within kNormTolerance.
  FockState(int mode_count, int cap, std::vector<Entry> entries)
      : FockState(mode_count, cap, canonicalize(mode_count, cap, std::move(entries)), Unchecked{}) {
    const double norm = norm_squared();
    if (std::abs(norm - 1.0) > kNormTolerance) {
      throw ValidationError("Fock state is not normalized (norm^2 = " + std::to_string(norm) + ")");
    }
  }

  static FockState basis(Occupation occupation, std::optional<int> cap = std::nullopt) {
    const int total = std::accumulate(occupation.begin(), occupation.end(), 0);
    const int m = static_cast<int>(occupation.size());
    std::vector<Entry> entries;
    entries.emplace_back(std::move(occupation), Amplitude{1.0, 0.0});
    return FockState(m, cap.value_or(total), std::move(entries));
  }

  int mode_count() const { return modes_; }
  int cap() const { return cap_; }
  std::size_t size() const { return entries_.size(); }
  std::span<const Entry> entries() const { return entries_; }

  Amplitude amplitude(const Occupation& occupation) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), occupation,
                                     [](const Entry& e, const Occupation& o) { return e.first < o; });
    return (it != entries_.end() && it->first == occupation) ? it->second : Amplitude{};
  }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& e : entries_) n += std::norm(e.second);
    return n;
  }

  void check_mode(int j) const {
    if (j < 0 || j >= modes_) {
      throw ValidationError("mode index " + std::to_string(j) + " out of range for " + std::to_string(modes_) +
                            " modes");
    }
  }

  // Used by the gate implementations, which preserve canonical form themselves.
  struct Unchecked {};
  FockState(int mode_count, int cap, std::vector<Entry> entries, Unchecked)
      : modes_(mode_count), cap_(cap), entries_(std::move(entries)) {}

  static std::vector<Entry> canonicalize(int mode_count, int cap, std::vector<Entry> entries) {
    if (mode_count < 1) throw ValidationError("a Fock state needs at least one mode");
    for (const auto& [occ, amp] : entries) {
      if (static_cast<int>(occ.size()) != mode_count) {
        throw DimensionError("occupation vector length does not match mode count");
      }
      int total = 0;
      for (int k : occ) {
        if (k < 0) throw ValidationError("occupation numbers must be non-negative");
        total += k;
      }
      if (total > cap) {
        throw DimensionError("basis vector with " + std::to_string(total) + " photons exceeds cap " +
                                 std::to_string(cap),
                             total);
      }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> out;
    out.reserve(entries.size());
    for (auto& e : entries) {
      if (!out.empty() && out.back().first == e.first) {
        out.back().second += e.second;
      } else {
        out.push_back(std::move(e));
      }
    }
    std::erase_if(out, [](const Entry& e) { return std::abs(e.second) < kPruneThreshold; });
    return out;
  }

 private:
  int modes_;
  int cap_;
  std::vector<Entry> entries_;
};

namespace detail {

inline FockState from_accumulator(int modes, int cap,
                                  std::unordered_map<Occupation, Amplitude, OccupationHash>&& acc) {
  std::vector<FockState::Entry> entries;
  entries.reserve(acc.size());
  for (auto& [occ, amp] : acc) {
    if (std::abs(amp) >= kPruneThreshold) entries.emplace_back(occ, amp);
  }
  std::sort(entries.begin(), entries.end(),
            [](const FockState::Entry& a, const FockState::Entry& b) { return a.first < b.first; });
  return FockState(modes, cap, std::move(entries), FockState::Unchecked{});
}

}  // namespace detail

/// Tensor product of single-mode factors. The default cap is the sum of the
/// factor cutoffs.
inline FockState product_state(std::span<const SingleModeState> factors, std::optional<int> cap = std::nullopt) {
  if (factors.empty()) throw ValidationError("product state needs at least one factor");
  int required = 0;
  int cutoff_sum = 0;
  for (const auto& f : factors) {
    required += f.max_occupied();
    cutoff_sum += f.cutoff();
  }
  const int limit = cap.value_or(cutoff_sum);
  if (required > limit) {
    throw DimensionError("product state needs a total-photon cap of at least " + std::to_string(required) +
                             " (cap is " + std::to_string(limit) + ")",
                         required);
  }
  std::vector<FockState::Entry> entries{{Occupation{}, Amplitude{1.0, 0.0}}};
  for (const auto& f : factors) {
    std::vector<FockState::Entry> next;
    for (const auto& [occ, amp] : entries) {
      for (int k = 0; k <= f.cutoff(); ++k) {
        const auto c = f.amplitude(k);
        if (std::abs(c) < kPruneThreshold) continue;
        auto o = occ;
        o.push_back(k);
        next.emplace_back(std::move(o), amp * c);
      }
    }
    entries = std::move(next);
  }
  return FockState(static_cast<int>(factors.size()), limit, std::move(entries));
}

inline FockState product_state(std::initializer_list<SingleModeState> factors, std::optional<int> cap = std::nullopt) {
  return product_state(std::span<const SingleModeState>(factors.begin(), factors.size()), cap);
}

/// Transmissivity t and phase phi define the 2x2 mode matrix
///
///   [  √t            e^{-iφ}√(1-t) ]
///   [ -e^{iφ}√(1-t)  √t            ]
///
/// acting on creation operators column-wise: a_i† -> B00 a_i† + B10 a_j†,
/// a_j† -> B01 a_i† + B11 a_j†.
inline Eigen::Matrix2cd beam_splitter_matrix(double transmissivity, double phase) {
  const double t = std::sqrt(transmissivity);
  const double r = std::sqrt(1.0 - transmissivity);
  const Amplitude e = std::polar(1.0, phase);
  Eigen::Matrix2cd b;
  b << t, std::conj(e) * r, -e * r, t;
  return b;
}

/// Applies a general 2x2 mode unitary to modes (i, j) exactly, sector by
/// sector in the local photon number p + q.
inline FockState apply_two_mode(const FockState& state, int i, int j, const Eigen::Matrix2cd& b) {
  state.check_mode(i);
  state.check_mode(j);
  if (i == j) throw ValidationError("two-mode gate needs distinct modes");

  // blocks[n](p_out, p_in) for the sector with n photons in (i, j)
  std::vector<Eigen::MatrixXcd> blocks;
  const auto block_for = [&](int n) -> const Eigen::MatrixXcd& {
    while (static_cast<int>(blocks.size()) <= n) {
      const int s = static_cast<int>(blocks.size());
      Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(s + 1, s + 1);
      for (int p = 0; p <= s; ++p) {
        const int q = s - p;
        for (int k = 0; k <= p; ++k) {
          const Amplitude left = detail::binomial(p, k) * detail::ipow(b(0, 0), k) * detail::ipow(b(1, 0), p - k);
          for (int l = 0; l <= q; ++l) {
            const int po = k + l;
            const Amplitude right = detail::binomial(q, l) * detail::ipow(b(0, 1), l) * detail::ipow(b(1, 1), q - l);
            const double norm = std::exp(0.5 * (detail::log_factorial(po) + detail::log_factorial(s - po) -
                                                 detail::log_factorial(p) - detail::log_factorial(q)));
            blk(po, p) += left * right * norm;
          }
        }
      }
      blocks.push_back(std::move(blk));
    }
    return blocks[static_cast<std::size_t>(n)];
  };

  std::unordered_map<Occupation, Amplitude, detail::OccupationHash> acc;
  acc.reserve(state.size() * 2);
  for (const auto& [occ, amp] : state.entries()) {
    const int p = occ[static_cast<std::size_t>(i)];
    const int n = p + occ[static_cast<std::size_t>(j)];
    const auto& blk = block_for(n);
    Occupation out = occ;
    for (int po = 0; po <= n; ++po) {
      const Amplitude coeff = blk(po, p);
      if (coeff == Amplitude{}) continue;
      out[static_cast<std::size_t>(i)] = po;
      out[static_cast<std::size_t>(j)] = n - po;
      acc[out] += coeff * amp;
    }
  }
  return detail::from_accumulator(state.mode_count(), state.cap(), std::move(acc));
}

inline FockState apply_beam_splitter(const FockState& state, int i, int j, double transmissivity, double phase) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw ValidationError("transmissivity must lie in [0, 1]");
  }
  return apply_two_mode(state, i, j, beam_splitter_matrix(transmissivity, phase));
}

/// exp(-i theta n_j): amplitude on occupation k picks up exp(-i theta k_j).
inline FockState apply_phase_shift(const FockState& state, int j, double theta) {
  state.check_mode(j);
  std::vector<FockState::Entry> entries(state.entries().begin(), state.entries().end());
  for (auto& [occ, amp] : entries) {
    amp *= std::polar(1.0, -theta * occ[static_cast<std::size_t>(j)]);
  }
  return FockState(state.mode_count(), state.cap(), std::move(entries), FockState::Unchecked{});
}

struct NumberCorrelation {
  double joint;    // <n_j n_k>
  double product;  // <n_j><n_k>
};

inline NumberCorrelation number_correlation(const FockState& state, int j, int k) {
  state.check_mode(j);
  state.check_mode(k);
  double joint = 0.0, nj = 0.0, nk = 0.0;
  for (const auto& [occ, amp] : state.entries()) {
    const double p = std::norm(amp);
    const double a = occ[static_cast<std::size_t>(j)];
    const double b = occ[static_cast<std::size_t>(k)];
    joint += p * a * b;
    nj += p * a;
    nk += p * b;
  }
  return {joint, nj * nk};
}

/// |<reference|state>|².
inline double fidelity_projector(const FockState& state, const FockState& reference) {
  if (state.mode_count() != reference.mode_count()) {
    throw DimensionError("fidelity needs states with the same number of modes");
  }
  Amplitude overlap{};
  auto a = state.entries().begin();
  auto b = reference.entries().begin();
  while (a != state.entries().end() && b != reference.entries().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      overlap += std::conj(b->second) * a->second;
      ++a;
      ++b;
    }
  }
  return std::min(1.0, std::norm(overlap));
}

}  // namespace distmet
