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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "distmet/error.hpp"

namespace distmet {

/// Weights of the estimated combination q = Σ_j w_j θ_j, normalized so that
/// max_j |w_j| = 1/d.
class WeightVector {
 public:
  /// Accepts weights that already satisfy the normalization (within 1e-12).
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw ValidationError("weight vector must be non-empty");
    for (double x : w_) {
      if (!std::isfinite(x)) throw ValidationError("weights must be finite");
    }
    const double target = 1.0 / static_cast<double>(w_.size());
    if (std::abs(max_abs() - target) > 1e-12) {
      throw ValidationError("weights must satisfy max|w_j| = 1/d (got " + std::to_string(max_abs()) +
                            ", expected " + std::to_string(target) + ")");
    }
  }

  /// Rescales arbitrary non-zero weights to max|w_j| = 1/d.
  static WeightVector normalized(std::vector<double> raw) {
    if (raw.empty()) throw ValidationError("weight vector must be non-empty");
    double peak = 0.0;
    for (double x : raw) peak = std::max(peak, std::abs(x));
    if (!(peak > 0.0) || !std::isfinite(peak)) throw ValidationError("weight vector is zero or not finite");
    const double scale = 1.0 / (peak * static_cast<double>(raw.size()));
    for (double& x : raw) x *= scale;
    return WeightVector(std::move(raw));
  }

  /// w = (1/d, ..., 1/d): the spatial average.
  static WeightVector uniform(int d) {
    if (d < 1) throw ValidationError("d must be at least 1");
    return WeightVector(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
  }

  int d() const { return static_cast<int>(w_.size()); }
  std::span<const double> values() const { return w_; }
  double operator[](int j) const { return w_[static_cast<std::size_t>(j)]; }

  double norm_squared() const { return std::inner_product(w_.begin(), w_.end(), w_.begin(), 0.0); }
  double l1_norm() const {
    return std::accumulate(w_.begin(), w_.end(), 0.0, [](double s, double x) { return s + std::abs(x); });
  }
  double max_abs() const {
    double peak = 0.0;
    for (double x : w_) peak = std::max(peak, std::abs(x));
    return peak;
  }
  bool non_negative() const {
    return std::all_of(w_.begin(), w_.end(), [](double x) { return x >= 0.0; });
  }

  /// |w|² ≤ c/d. Metadata only; nothing requires it.
  bool well_distributed(double c) const { return norm_squared() <= c / static_cast<double>(d()) + 1e-15; }

 private:
  std::vector<double> w_;
};

}  // namespace distmet
