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

// Nelder-Mead simplex minimization with dimension-adaptive coefficients
// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "distmet/error.hpp"

namespace distmet {

struct NelderMeadOptions {
  std::size_t max_evaluations = 2000;
  /// Stop when every vertex lies within this distance of the best one.
  double diameter_tolerance = 1e-8;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Minimizes f. The returned point is the best one ever evaluated, so a
/// larger evaluation budget can never return a worse value.
template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opts = {}) {
  if (opts.max_evaluations == 0) throw ValidationError("evaluation budget must be positive");
  const std::size_t n = x0.size();
  NelderMeadResult best;

  const auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
    return v;
  };
  const auto budget_left = [&] { return best.evaluations < opts.max_evaluations; };

  if (n == 0) {
    eval(x0);
    best.converged = true;
    return best;
  }

  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dn;
  const double rho = 0.75 - 0.5 / dn;
  const double sigma = 1.0 - 1.0 / dn;

  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = eval(pts[0]);
  for (std::size_t i = 0; i < n && budget_left(); ++i) {
    pts[i + 1][i] += opts.initial_step;
    vals[i + 1] = eval(pts[i + 1]);
  }
  if (!budget_left()) return best;

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  const auto affine = [&](double t, const std::vector<double>& from, std::vector<double>& out) {
    for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
  };

  while (budget_left()) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t lo = order.front();
    const std::size_t hi = order.back();
    const std::size_t second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < n; ++k) d2 += (pts[i][k] - pts[lo][k]) * (pts[i][k] - pts[lo][k]);
      diameter = std::max(diameter, std::sqrt(d2));
    }
    if (diameter < opts.diameter_tolerance) {
      best.converged = true;
      break;
    }
    ++best.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == hi) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / dn;
    }

    affine(-alpha, pts[hi], trial);
    const double fr = eval(trial);
    if (fr < vals[lo]) {
      if (!budget_left()) break;
      affine(-alpha * gamma, pts[hi], trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[hi] = trial2;
        vals[hi] = fe;
      } else {
        pts[hi] = trial;
        vals[hi] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[hi] = trial;
      vals[hi] = fr;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = fr < vals[hi];
    affine(outside ? -alpha * rho : rho, pts[hi], trial2);
    const double fc = eval(trial2);
    if (fc < std::min(fr, vals[hi])) {
      pts[hi] = trial2;
      vals[hi] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n && budget_left(); ++i) {
      if (i == lo) continue;
      for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[lo][k] + sigma * (pts[i][k] - pts[lo][k]);
      vals[i] = eval(pts[i]);
    }
  }
  return best;
}

}  // namespace distmet
