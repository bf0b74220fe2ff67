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

// Analytic upper bounds on F_w and the lower bounds on Δq they imply.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/network.hpp"
#include "distmet/qfi.hpp"
#include "distmet/weights.hpp"

namespace distmet {

inline constexpr double kSeparableC = 20.0;
inline constexpr double kBoundSlack = 1e-9;

namespace detail {

inline void check_photon_numbers(std::span<const int> n) {
  for (int x : n) {
    if (x < 0) throw ValidationError("photon numbers must be non-negative");
  }
}

}  // namespace detail

/// 4 Tr[N S (N+1) S] for a Fock input |n>, an upper bound on F_w.
inline double fock_trace_bound(const ModeUnitary& u, const WeightVector& w, std::span<const int> n,
                               std::span<const int> phase_modes) {
  detail::check_photon_numbers(n);
  if (static_cast<int>(n.size()) != u.dim()) throw DimensionError("photon-number vector length must equal mode count");
  const Eigen::MatrixXcd s = s_matrix(u, w, phase_modes).entries;
  double total = 0.0;
  for (int l = 0; l < u.dim(); ++l) {
    for (int m = 0; m < u.dim(); ++m) {
      total += n[static_cast<std::size_t>(l)] * (n[static_cast<std::size_t>(m)] + 1.0) * std::norm(s(l, m));
    }
  }
  return 4.0 * total;
}

inline double fock_trace_bound(const ModeUnitary& u, const WeightVector& w, std::span<const int> n) {
  return fock_trace_bound(u, w, n, default_phase_modes(w.d()));
}

/// Unitary-independent caps on F_w for Fock inputs.
///
/// `pairing` sorts photon numbers and |w| in decreasing order and sums
/// 4 n(n+1) w², which bounds the trace form for any sign pattern.
/// `closed_form` is 4|n|²/d², valid only for non-negative weights;
/// for mixed signs it can fall below the true F_w.
struct FockEigenvalueBound {
  double pairing = 0.0;
  double closed_form = 0.0;
  double value = 0.0;
};

inline FockEigenvalueBound fock_eigenvalue_bound(std::span<const int> n, const WeightVector& w) {
  detail::check_photon_numbers(n);
  if (static_cast<int>(n.size()) < w.d()) throw DimensionError("fewer modes than weights");
  std::vector<double> counts(n.begin(), n.end());
  std::vector<double> mags(counts.size(), 0.0);
  for (int j = 0; j < w.d(); ++j) mags[static_cast<std::size_t>(j)] = std::abs(w[j]);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  std::sort(mags.begin(), mags.end(), std::greater<>());

  FockEigenvalueBound out;
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.pairing += 4.0 * counts[i] * (counts[i] + 1.0) * mags[i] * mags[i];
    norm_sq += counts[i] * counts[i];
  }
  out.closed_form = 4.0 * norm_sq / (static_cast<double>(w.d()) * w.d());
  out.value = w.non_negative() ? std::min(out.pairing, out.closed_form) : out.pairing;
  return out;
}

/// d|w|² / (2|n|).
inline double fock_delta_q_bound(std::span<const int> n, const WeightVector& w) {
  detail::check_photon_numbers(n);
  double norm_sq = 0.0;
  for (int x : n) norm_sq += static_cast<double>(x) * x;
  if (norm_sq == 0.0) throw ValidationError("Fock bound undefined for the vacuum input");
  return w.d() * w.norm_squared() / (2.0 * std::sqrt(norm_sq));
}

/// Input-moment constants of the separable-state bound F_w <= A/d + B|w|².
struct BoundConstants {
  double alpha_max = 0.0;
  double n_max = 0.0;     // max(n̄ + 1/2 - |α|²)
  double xi_max = 0.0;    // max|ξ - α²|
  double beta_max = 0.0;  // max|β + α/2 - n̄α|
  double v_max = 0.0;
  double pair_n_max = 0.0;   // max over l≠m of n̄_l(n̄_m+1) - |α_l|²|α_m|²
  double pair_xi_max = 0.0;  // max over l≠m of |ξ_l* ξ_m - α_l*² α_m²|
  double m_max = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = kSeparableC;
};

inline BoundConstants separable_bound_constants(std::span<const MomentSet> moments) {
  if (moments.empty()) throw ValidationError("need at least one mode");
  BoundConstants k;
  for (const auto& mo : moments) {
    mo.validate();
    const double a2 = std::norm(mo.alpha);
    k.alpha_max = std::max(k.alpha_max, std::abs(mo.alpha));
    k.n_max = std::max(k.n_max, mo.nbar + 0.5 - a2);
    k.xi_max = std::max(k.xi_max, std::abs(mo.xi - mo.alpha * mo.alpha));
    k.beta_max = std::max(k.beta_max, std::abs(mo.beta + 0.5 * mo.alpha - mo.nbar * mo.alpha));
    k.v_max = std::max(k.v_max, mo.v);
    k.m_max = std::max(k.m_max, mo.m);
  }
  for (std::size_t l = 0; l < moments.size(); ++l) {
    for (std::size_t r = 0; r < moments.size(); ++r) {
      if (l == r) continue;
      const auto& p = moments[l];
      const auto& q = moments[r];
      k.pair_n_max = std::max(k.pair_n_max, p.nbar * (q.nbar + 1.0) - std::norm(p.alpha) * std::norm(q.alpha));
      k.pair_xi_max = std::max(
          k.pair_xi_max, std::abs(std::conj(p.xi) * q.xi - std::conj(p.alpha * p.alpha) * q.alpha * q.alpha));
    }
  }
  k.a = 16.0 * k.alpha_max * (5.0 * k.n_max * k.alpha_max + 6.0 * k.xi_max * k.alpha_max + 4.0 * k.beta_max);
  k.b = 4.0 * (k.v_max + k.pair_n_max + k.pair_xi_max + 2.0 * k.xi_max * k.alpha_max * k.alpha_max);
  if (k.m_max > 0.0 && !(k.a + k.b < k.c * k.c * k.m_max)) {
    throw ValidationError("moment constants violate A + B < C² max m");
  }
  return k;
}

inline double separable_fw_bound(const BoundConstants& k, const WeightVector& w) {
  return k.a / w.d() + k.b * w.norm_squared();
}

/// 1 / (C √(d max m)); the weight-general form d|w|²/(C√(d max m)) reduces to
/// this when |w|² = 1/d.
inline double simplified_delta_q_bound(const BoundConstants& k, int d) {
  if (d < 1) throw ValidationError("d must be positive");
  if (!(k.m_max > 0.0)) throw ValidationError("bound undefined when every mode is empty");
  return 1.0 / (k.c * std::sqrt(d * k.m_max));
}

inline double separable_delta_q_bound(const BoundConstants& k, const WeightVector& w) {
  if (!(k.m_max > 0.0)) throw ValidationError("bound undefined when every mode is empty");
  return w.d() * w.norm_squared() / (k.c * std::sqrt(w.d() * k.m_max));
}

struct TermCheck {
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct TermBoundReport {
  std::array<TermCheck, 6> terms{};
  double fw = 0.0;
  double fw_bound = 0.0;
  bool fw_pass = true;
  bool all_pass() const {
    return fw_pass && std::all_of(terms.begin(), terms.end(), [](const TermCheck& t) { return t.pass; });
  }
};

/// Evaluates each of the six terms against its own cap, and F_w against A/d + B|w|².
inline TermBoundReport verify_term_bounds(const ModeUnitary& u, std::span<const MomentSet> moments,
                                          std::span<const int> phase_modes, const WeightVector& w,
                                          double slack = kBoundSlack) {
  const BoundConstants k = separable_bound_constants(moments);
  const FwTerms f = fw_terms(u, moments, phase_modes, w);
  const double d = w.d();
  const double wmax2 = w.max_abs() * w.max_abs();
  const double w2 = w.norm_squared();
  const double a2 = k.alpha_max * k.alpha_max;
  const std::array<double, 6> caps = {
      k.v_max * w2,
      k.pair_n_max * w2,
      k.pair_xi_max * w2,
      20.0 * d * k.n_max * wmax2 * a2,
      2.0 * k.xi_max * a2 * w2 + 24.0 * d * k.xi_max * wmax2 * a2,
      16.0 * d * wmax2 * k.alpha_max * k.beta_max,
  };
  TermBoundReport report;
  for (std::size_t i = 0; i < 6; ++i) {
    report.terms[i] = {f.terms[i], caps[i], f.terms[i] <= caps[i] + slack * std::max(1.0, caps[i])};
  }
  report.fw = f.fw();
  report.fw_bound = separable_fw_bound(k, w);
  report.fw_pass = report.fw <= report.fw_bound + slack * std::max(1.0, report.fw_bound);
  return report;
}

inline TermBoundReport verify_term_bounds(const ModeUnitary& u, std::span<const MomentSet> moments,
                                          const WeightVector& w, double slack = kBoundSlack) {
  return verify_term_bounds(u, moments, default_phase_modes(w.d()), w, slack);
}

}  // namespace distmet
