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

// Reference implementations used only by the tests.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "distmet/fock.hpp"

namespace distmet::testing {

using cd = std::complex<double>;

/// Ryser's formula.
inline cd permanent(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  cd total = 0.0;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    cd prod = 1.0;
    for (int r = 0; r < n; ++r) {
      cd row = 0.0;
      for (int c = 0; c < n; ++c) {
        if (mask & (1u << c)) row += a(r, c);
      }
      prod *= row;
    }
    const int bits = __builtin_popcount(mask);
    total += ((n - bits) % 2 ? -1.0 : 1.0) * prod;
  }
  return total;
}

inline std::vector<int> expand(const Occupation& occ) {
  std::vector<int> out;
  for (std::size_t k = 0; k < occ.size(); ++k) {
    for (int c = 0; c < occ[k]; ++c) out.push_back(static_cast<int>(k));
  }
  return out;
}

inline double factorial_product(const Occupation& occ) {
  double p = 1.0;
  for (int k : occ) p *= std::tgamma(k + 1.0);
  return p;
}

/// <out| U |in> for a_k† -> Σ_j U_jk a_j†.
inline cd transition_amplitude(const Eigen::MatrixXcd& u, const Occupation& in, const Occupation& out) {
  const auto cols = expand(in);
  const auto rows = expand(out);
  if (cols.size() != rows.size()) return 0.0;
  Eigen::MatrixXcd sub(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) sub(r, c) = u(rows[r], cols[c]);
  }
  return permanent(sub) / std::sqrt(factorial_product(in) * factorial_product(out));
}

/// All occupations of `modes` modes with exactly `total` photons.
inline std::vector<Occupation> sector(int modes, int total) {
  std::vector<Occupation> out;
  Occupation occ(static_cast<std::size_t>(modes), 0);
  const auto rec = [&](auto&& self, int k, int left) -> void {
    if (k == modes - 1) {
      occ[static_cast<std::size_t>(k)] = left;
      out.push_back(occ);
      return;
    }
    for (int x = left; x >= 0; --x) {
      occ[static_cast<std::size_t>(k)] = x;
      self(self, k + 1, left - x);
    }
  };
  if (modes > 0) rec(rec, 0, total);
  return out;
}

/// Truncated annihilation operator on levels 0..dim-1.
inline Eigen::MatrixXcd lowering(int dim) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

/// Moments from dense operator products, with two spare levels so the
/// truncated ladder acts exactly on the state's support.
inline MomentSet dense_moments(const SingleModeState& s) {
  const int dim = s.cutoff() + 3;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (int k = 0; k <= s.cutoff(); ++k) v[k] = s.amplitude(k);
  const Eigen::MatrixXcd a = lowering(dim);
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd n = ad * a;
  const auto ex = [&](const Eigen::MatrixXcd& op) { return v.dot(op * v); };
  MomentSet m;
  m.alpha = ex(a);
  m.nbar = ex(n).real();
  m.xi = ex(a * a);
  m.beta = ex(ad * a * a);
  m.m = ex(n * n).real();
  m.v = m.m - m.nbar * m.nbar;
  return m;
}

}  // namespace distmet::testing
