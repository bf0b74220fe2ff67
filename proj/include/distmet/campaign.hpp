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

// Seeded verification campaigns. Instance i draws everything from
// instance_seed(master, i), so rows are reproducible one by one and the
// output order is the instance order regardless of scheduling.

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "distmet/bounds.hpp"
#include "distmet/csv.hpp"
#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/network.hpp"
#include "distmet/parallel.hpp"
#include "distmet/protocols.hpp"
#include "distmet/qfi.hpp"
#include "distmet/random.hpp"
#include "distmet/weights.hpp"

namespace distmet {

struct CampaignLimits {
  int max_d = 3;
  int max_photons = 4;  // Fock family: total photons
  int max_cutoff = 3;   // separable family: per-mode cutoff
};

/// max|w| = 1/d, every |w_j| drawn from [1/(2d), 1/d].
inline WeightVector random_weights(int d, Rng& rng, bool allow_negative) {
  std::vector<double> raw(static_cast<std::size_t>(d));
  for (double& x : raw) {
    x = rng.uniform(0.5, 1.0);
    if (allow_negative && rng.uniform() < 0.5) x = -x;
  }
  return WeightVector::normalized(std::move(raw));
}

inline SingleModeState random_single_mode(int cutoff, Rng& rng) {
  std::vector<Amplitude> a(static_cast<std::size_t>(cutoff + 1));
  double norm = 0.0;
  for (auto& x : a) {
    x = rng.complex_normal();
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return SingleModeState(std::move(a));
}

/// √(wᵀF⁺w), or +inf when w leaves the support of F.
inline double crb_or_infinity(const QfiMatrix& f, const WeightVector& w) {
  try {
    return crb_delta_q(f, w);
  } catch (const EstimationImpossible&) {
    return std::numeric_limits<double>::infinity();
  }
}

inline bool within(double lhs, double rhs, double slack = kBoundSlack) {
  return lhs <= rhs + slack * std::max(1.0, std::abs(rhs));
}

// ---------------------------------------------------------------------------
// Fock inputs

struct FockRow {
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  int d = 0;
  int modes = 0;
  std::vector<int> photons;
  std::vector<double> weights;
  double fw = 0.0;
  double fw_moments = 0.0;
  double trace_bound = 0.0;
  FockEigenvalueBound eigen;
  double crb = 0.0;
  double fock_dq = 0.0;
  bool pass = true;

  /// Smallest slack over the checked inequalities.
  double margin() const {
    return std::min({trace_bound - fw, eigen.value - fw, eigen.pairing - trace_bound, crb - fock_dq});
  }
};

/// d in 1..max_d, 2d modes, 1..max_photons photons dropped on random modes,
/// Haar unitary, non-negative weights on modes 0..d-1.
inline FockRow fock_instance(std::uint64_t master, std::size_t index, const CampaignLimits& lim = {}) {
  FockRow row;
  row.instance = index;
  row.seed = instance_seed(master, index);
  Rng rng(row.seed);
  row.d = rng.integer(1, lim.max_d);
  row.modes = 2 * row.d;
  const int total = rng.integer(1, lim.max_photons);
  row.photons.assign(static_cast<std::size_t>(row.modes), 0);
  for (int p = 0; p < total; ++p) ++row.photons[static_cast<std::size_t>(rng.integer(0, row.modes - 1))];
  const WeightVector w = random_weights(row.d, rng, false);
  row.weights.assign(w.values().begin(), w.values().end());
  const ModeUnitary u = ModeUnitary::haar(row.modes, rng);
  const auto phase_modes = default_phase_modes(row.d);

  const FockState psi = apply_mode_unitary(FockState::basis(row.photons), u);
  const QfiMatrix f = qfi_direct(psi, phase_modes);
  row.fw = f.weighted(w);
  std::vector<MomentSet> moments;
  for (int k : row.photons) moments.push_back(single_mode_moments(SingleModeState::fock(k)));
  row.fw_moments = qfi_from_moments(u, moments, phase_modes, w);
  row.trace_bound = fock_trace_bound(u, w, row.photons, phase_modes);
  row.eigen = fock_eigenvalue_bound(row.photons, w);
  row.crb = crb_or_infinity(f, w);
  row.fock_dq = fock_delta_q_bound(row.photons, w);
  row.pass = within(row.fw, row.trace_bound) && within(row.fw, row.eigen.value) &&
             within(row.trace_bound, row.eigen.pairing) && within(row.fock_dq, row.crb) &&
             std::abs(row.fw - row.fw_moments) <= 1e-9 * std::max(1.0, row.fw);
  return row;
}

inline std::vector<std::string> fock_header() {
  return {"instance", "seed",        "d",           "modes",         "photons",     "weights",
          "fw",       "fw_moments",  "trace_bound", "pairing_bound", "closed_form", "eigen_bound",
          "crb_delta_q", "fock_delta_q", "margin",    "pass"};
}

inline std::vector<std::string> fock_fields(const FockRow& r) {
  return {std::to_string(r.instance), std::to_string(r.seed),       std::to_string(r.d),
          std::to_string(r.modes),    join(r.photons),              join(r.weights),
          format_double(r.fw),        format_double(r.fw_moments),  format_double(r.trace_bound),
          format_double(r.eigen.pairing), format_double(r.eigen.closed_form), format_double(r.eigen.value),
          format_double(r.crb),       format_double(r.fock_dq),         format_double(r.margin()),
          r.pass ? "1" : "0"};
}

// ---------------------------------------------------------------------------
// Separable inputs

struct SeparableRow {
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  int d = 0;
  int modes = 0;
  std::vector<int> cutoffs;
  std::vector<double> weights;
  double m_max = 0.0;
  double a = 0.0;
  double b = 0.0;
  TermBoundReport terms;
  double simplified_fw = 0.0;  // C² max m / d
  double crb = 0.0;
  double separable_delta_q = 0.0;  // d|w|² / (C √(d max m))
  bool pass = true;

  double margin() const {
    double m = std::min({terms.fw_bound - terms.fw, simplified_fw - terms.fw, crb - separable_delta_q});
    for (const auto& t : terms.terms) m = std::min(m, t.bound - t.value);
    return m;
  }
};

/// d in 1..max_d, 2d modes, each a random pure state with cutoff
/// 0..max_cutoff, Haar unitary, signed weights with |w|² ≥ 1/(4d).
inline SeparableRow separable_instance(std::uint64_t master, std::size_t index, const CampaignLimits& lim = {}) {
  SeparableRow row;
  row.instance = index;
  row.seed = instance_seed(master, index);
  Rng rng(row.seed);
  row.d = rng.integer(1, lim.max_d);
  row.modes = 2 * row.d;
  std::vector<MomentSet> moments;
  for (int k = 0; k < row.modes; ++k) {
    const int c = rng.integer(0, lim.max_cutoff);
    row.cutoffs.push_back(c);
    moments.push_back(single_mode_moments(random_single_mode(c, rng)));
  }
  const WeightVector w = random_weights(row.d, rng, true);
  row.weights.assign(w.values().begin(), w.values().end());
  const ModeUnitary u = ModeUnitary::haar(row.modes, rng);
  const auto phase_modes = default_phase_modes(row.d);

  const BoundConstants k = separable_bound_constants(moments);
  row.m_max = k.m_max;
  row.a = k.a;
  row.b = k.b;
  row.terms = verify_term_bounds(u, moments, phase_modes, w);
  row.simplified_fw = k.c * k.c * k.m_max / row.d;
  const QfiMatrix f = qfi_matrix_from_moments(u, moments, phase_modes);
  row.crb = crb_or_infinity(f, w);
  if (k.m_max > 0.0) {
    row.separable_delta_q = separable_delta_q_bound(k, w);
    row.pass = row.terms.all_pass() && row.terms.fw < row.simplified_fw && within(row.separable_delta_q, row.crb);
  } else {
    // all vacuum: F = 0 and q cannot be estimated
    row.separable_delta_q = std::numeric_limits<double>::infinity();
    row.pass = row.terms.all_pass() && std::abs(row.terms.fw) <= kBoundSlack;
  }
  return row;
}

inline std::vector<std::string> separable_header() {
  return {"instance", "seed",     "d",          "modes",         "cutoffs",     "weights",
          "m_max",    "A",        "B",          "F1",            "F2",          "F3",
          "F4",       "F5",       "F6",         "fw",            "fw_bound",    "simplified_fw",
          "crb_delta_q", "separable_delta_q", "terms_pass", "margin", "pass"};
}

inline std::vector<std::string> separable_fields(const SeparableRow& r) {
  std::vector<std::string> out = {std::to_string(r.instance), std::to_string(r.seed), std::to_string(r.d),
                                  std::to_string(r.modes),    join(r.cutoffs),       join(r.weights),
                                  format_double(r.m_max),     format_double(r.a),    format_double(r.b)};
  for (const auto& t : r.terms.terms) out.push_back(format_double(t.value));
  const bool terms_pass =
      std::all_of(r.terms.terms.begin(), r.terms.terms.end(), [](const TermCheck& t) { return t.pass; });
  for (double x : {r.terms.fw, r.terms.fw_bound, r.simplified_fw, r.crb, r.separable_delta_q}) out.push_back(format_double(x));
  out.push_back(terms_pass ? "1" : "0");
  out.push_back(format_double(r.margin()));
  out.push_back(r.pass ? "1" : "0");
  return out;
}

// ---------------------------------------------------------------------------

enum class CampaignFamily { kFock, kSeparable };

struct CampaignSummary {
  std::size_t instances = 0;
  std::size_t violations = 0;
};

/// Runs `count` instances in parallel and streams CSV in instance order.
inline CampaignSummary run_campaign(CampaignFamily family, std::uint64_t master, std::size_t count, std::ostream* csv,
                                   const CampaignLimits& lim = {}) {
  if (count == 0) throw ValidationError("instance count must be positive");
  CampaignSummary summary;
  summary.instances = count;
  std::vector<std::vector<std::string>> rows(count);
  std::vector<char> pass(count, 1);
  parallel_for(count, [&](std::size_t i) {
    if (family == CampaignFamily::kFock) {
      const auto r = fock_instance(master, i, lim);
      rows[i] = fock_fields(r);
      pass[i] = r.pass;
    } else {
      const auto r = separable_instance(master, i, lim);
      rows[i] = separable_fields(r);
      pass[i] = r.pass;
    }
  });
  if (csv) {
    CsvWriter w(*csv);
    w.row(family == CampaignFamily::kFock ? fock_header() : separable_header());
    for (const auto& r : rows) w.row(r);
  }
  for (char p : pass) summary.violations += p ? 0 : 1;
  return summary;
}

// ---------------------------------------------------------------------------
// Twin-Fock scaling over (d, N)

struct ProtocolSweepRow {
  int d = 0;
  int photons = 0;
  double simulated = 0.0;
  double formula = 0.0;
  double classical = std::numeric_limits<double>::quiet_NaN();  // needs N/d even
  double fock_bound = 0.0;
};

inline std::vector<ProtocolSweepRow> protocol_sweep(const std::vector<int>& ds, const std::vector<int>& ns,
                                                    double q_probe = kDefaultProbe, double step = kDefaultStep) {
  struct Job {
    int d, n;
  };
  std::vector<Job> jobs;
  for (int d : ds) {
    for (int n : ns) jobs.push_back({d, n});
  }
  std::vector<ProtocolSweepRow> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto [d, n] = jobs[i];
    const WeightVector w = WeightVector::uniform(d);
    ProtocolSweepRow r;
    r.d = d;
    r.photons = n;
    r.simulated = twin_fock_protocol(d, n, w, q_probe, step).delta_q;
    r.formula = twin_fock_formula(n);
    if (n % d == 0 && (n / d) % 2 == 0) r.classical = classical_baseline(n / d, w);
    std::vector<int> occ(static_cast<std::size_t>(2 * d), 0);
    occ[0] = occ[1] = n / 2;
    r.fock_bound = fock_delta_q_bound(occ, w);
    rows[i] = r;
  });
  return rows;
}

inline void write_protocol_sweep(std::ostream& out, const std::vector<ProtocolSweepRow>& rows) {
  CsvWriter w(out);
  w.row({"d", "N", "delta_q_simulated", "delta_q_formula", "classical_baseline", "fock_bound"});
  for (const auto& r : rows) {
    w.row({std::to_string(r.d), std::to_string(r.photons), format_double(r.simulated), format_double(r.formula),
           std::isnan(r.classical) ? "" : format_double(r.classical), format_double(r.fock_bound)});
  }
}

}  // namespace distmet
