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

#include <stdexcept>
#include <string>

namespace distmet {

/// Raised when a precondition on user-supplied data does not hold
/// (non-unitary matrix, bad weights, odd photon number, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A state or matrix does not fit the requested dimensions or photon cap.
class DimensionError : public ValidationError {
 public:
  DimensionError(const std::string& what, int required_cap = -1)
      : ValidationError(what), required_cap_(required_cap) {}

  /// Smallest total-photon cap that would have been accepted, or -1.
  int required_cap() const noexcept { return required_cap_; }

 private:
  int required_cap_;
};

/// The weight vector overlaps the kernel of the Fisher information matrix,
/// so the requested linear combination cannot be estimated.
class EstimationImpossible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Error propagation at a point where the signal has zero slope.
class InsensitivePoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace distmet
