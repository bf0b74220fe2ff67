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

// Quantum Fisher information for phases imprinted on output modes.
//
// Two independent routes:
//   * qfi_direct: F_jk = 4(<n_j n_k> - <n_j><n_k>) summed over the amplitudes
//     of the evolved state |Ψ_U>;
//   * qfi_from_moments: F_w = wᵀFw from single-mode input moments through the
//     six-term expansion F_w/4 = F1 + ... + F6, never touching |Ψ_U>.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/network.hpp"
#include "distmet/weights.hpp"

namespace distmet {

inline constexpr double kSupportThreshold = 1e-9;
inline constexpr double kKernelOverlapTolerance = 1e-8;

/// Modes carrying the phases; the default layout puts θ_j on mode j.
inline std::vector<int> default_phase_modes(int d) {
  std::vector<int> modes(static_cast<std::size_t>(d));
  std::iota(modes.begin(), modes.end(), 0);
  return modes;
}

namespace detail {

inline void check_phase_modes(std::span<const int> phase_modes, int mode_count) {
  std::vector<bool> seen(static_cast<std::size_t>(mode_count), false);
  for (int j : phase_modes) {
    if (j < 0 || j >= mode_count) throw ValidationError("phase mode " + std::to_string(j) + " out of range");
    if (seen[static_cast<std::size_t>(j)]) throw ValidationError("duplicate phase mode " + std::to_string(j));
    seen[static_cast<std::size_t>(j)] = true;
  }
}

}  // namespace detail

/// Real symmetric PSD d x d Fisher matrix with its eigensystem.
class QfiMatrix {
 public:
  explicit QfiMatrix(Eigen::MatrixXd entries, double support_threshold = kSupportThreshold)
      : f_(std::move(entries)), threshold_(support_threshold) {
    if (f_.rows() != f_.cols() || f_.rows() == 0) throw ValidationError("QFI matrix must be square and non-empty");
    const double scale = std::max(1.0, f_.cwiseAbs().maxCoeff());
    if ((f_ - f_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ValidationError("QFI matrix is not symmetric");
    }
    f_ = 0.5 * (f_ + f_.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(f_);
    values_ = eig.eigenvalues();
    vectors_ = eig.eigenvectors();
    if (values_.minCoeff() < -1e-9 * scale) throw ValidationError("QFI matrix is not positive semidefinite");
  }

  int d() const { return static_cast<int>(f_.rows()); }
  const Eigen::MatrixXd& entries() const { return f_; }
  /// Ascending.
  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }
  /// Relative to the largest eigenvalue.
  double support_threshold() const { return threshold_; }

  double weighted(const WeightVector& w) const {
    check(w);
    const Eigen::Map<const Eigen::VectorXd> v(w.values().data(), w.d());
    return v.dot(f_ * v);
  }

  void check(const WeightVector& w) const {
    if (w.d() != d()) throw DimensionError("weight vector length does not match QFI dimension");
  }

 private:
  Eigen::MatrixXd f_;
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
  double threshold_;
};

inline QfiMatrix qfi_direct(const FockState& psi_u, std::span<const int> phase_modes) {
  detail::check_phase_modes(phase_modes, psi_u.mode_count());
  const auto d = static_cast<Eigen::Index>(phase_modes.size());
  if (d == 0) throw ValidationError("need at least one phase mode");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd counts(d);
  for (const auto& [occ, amp] : psi_u.entries()) {
    const double p = std::norm(amp);
    for (Eigen::Index j = 0; j < d; ++j) counts[j] = occ[static_cast<std::size_t>(phase_modes[j])];
    mean += p * counts;
    second.noalias() += p * counts * counts.transpose();
  }
  return QfiMatrix(4.0 * (second - mean * mean.transpose()));
}

inline QfiMatrix qfi_direct(const FockState& psi_u, std::initializer_list<int> phase_modes) {
  return qfi_direct(psi_u, std::span<const int>(phase_modes.begin(), phase_modes.size()));
}

/// S_rs = Σ_j U_jr w_j conj(U_js): the weighted generator Σ_j w_j n_j written
/// in input-mode operators is Σ_{l,m} S_ml a_l† a_m. Hermitian, with
/// eigenvalues {w_j} padded by zeros.
struct SMatrix {
  Eigen::MatrixXcd entries;
  int dim() const { return static_cast<int>(entries.rows()); }
};

namespace detail {

inline Eigen::MatrixXcd s_entries(const ModeUnitary& u, std::span<const double> w, std::span<const int> phase_modes) {
  if (phase_modes.size() != w.size()) throw DimensionError("one phase mode per weight required");
  check_phase_modes(phase_modes, u.dim());
  Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(u.dim());
  for (std::size_t j = 0; j < w.size(); ++j) diag[phase_modes[j]] = w[j];
  return u.matrix().transpose() * diag.asDiagonal() * u.matrix().conjugate();
}

}  // namespace detail

inline SMatrix s_matrix(const ModeUnitary& u, const WeightVector& w, std::span<const int> phase_modes) {
  return {detail::s_entries(u, w.values(), phase_modes)};
}

inline SMatrix s_matrix(const ModeUnitary& u, const WeightVector& w) {
  return s_matrix(u, w, default_phase_modes(w.d()));
}

/// The six grouped terms of F_w/4 for a product input.
struct FwTerms {
  std::array<double, 6> terms{};
  double sum() const { return std::accumulate(terms.begin(), terms.end(), 0.0); }
  double fw() const { return 4.0 * sum(); }
};

namespace detail {

/// Any real weight vector; F_w is quadratic in w.
inline FwTerms fw_terms_raw(const ModeUnitary& u, std::span<const MomentSet> moments, std::span<const int> phase_modes,
                            std::span<const double> w) {
  const int m = u.dim();
  if (static_cast<int>(moments.size()) != m) {
    throw DimensionError("need one moment set per mode (" + std::to_string(m) + "), got " +
                         std::to_string(moments.size()));
  }
  const Eigen::MatrixXcd s = s_entries(u, w, phase_modes);
  const auto& mo = moments;
  const auto at = [&](int l) -> const MomentSet& { return mo[static_cast<std::size_t>(l)]; };

  FwTerms out;
  auto& f = out.terms;
  for (int l = 0; l < m; ++l) f[0] += std::norm(s(l, l)) * at(l).v;

  for (int l = 0; l < m; ++l) {
    const auto& a = at(l);
    for (int k = 0; k < m; ++k) {
      if (k == l) continue;
      const auto& b = at(k);
      f[1] += std::norm(s(l, k)) * (a.nbar * (b.nbar + 1.0) - std::norm(a.alpha) * std::norm(b.alpha));
      const Amplitude pair = std::conj(a.xi) * b.xi - std::conj(a.alpha * a.alpha) * b.alpha * b.alpha;
      f[2] += (s(k, l) * s(k, l) * pair).real();
    }
  }

  // Triple sums run over pairwise-distinct indices (l, m, s).
  Amplitude t4{}, t5{};
  for (int l = 0; l < m; ++l) {
    const auto& a = at(l);
    const double n_prime = 2.0 * a.nbar + 1.0 - 2.0 * std::norm(a.alpha);
    const Amplitude x_l = std::conj(a.xi) - std::conj(a.alpha * a.alpha);
    for (int k = 0; k < m; ++k) {
      if (k == l) continue;
      for (int r = 0; r < m; ++r) {
        if (r == l || r == k) continue;
        t4 += s(k, l) * s(l, r) * n_prime * at(k).alpha * std::conj(at(r).alpha);
        t5 += s(k, l) * s(r, l) * x_l * at(k).alpha * at(r).alpha;
      }
    }
  }
  f[3] = t4.real();
  f[4] = 2.0 * t5.real();

  Amplitude t6{};
  for (int l = 0; l < m; ++l) {
    const auto& a = at(l);
    const Amplitude beta_l = 2.0 * std::conj(a.beta) + std::conj(a.alpha) - 2.0 * a.nbar * std::conj(a.alpha);
    for (int r = 0; r < m; ++r) {
      if (r == l) continue;
      t6 += s(l, l) * s(r, l) * beta_l * at(r).alpha;
    }
  }
  f[5] = 2.0 * t6.real();
  return out;
}

}  // namespace detail

inline FwTerms fw_terms(const ModeUnitary& u, std::span<const MomentSet> moments, std::span<const int> phase_modes,
                        const WeightVector& w) {
  return detail::fw_terms_raw(u, moments, phase_modes, w.values());
}

inline FwTerms fw_terms(const ModeUnitary& u, std::span<const MomentSet> moments, const WeightVector& w) {
  return fw_terms(u, moments, default_phase_modes(w.d()), w);
}

inline double qfi_from_moments(const ModeUnitary& u, std::span<const MomentSet> moments,
                               std::span<const int> phase_modes, const WeightVector& w) {
  return fw_terms(u, moments, phase_modes, w).fw();
}

inline double qfi_from_moments(const ModeUnitary& u, std::span<const MomentSet> moments, const WeightVector& w) {
  return fw_terms(u, moments, w).fw();
}

/// Full d x d matrix from moments by polarization:
/// F_jk = (F_{e_j+e_k} - F_{e_j} - F_{e_k}) / 2.
inline QfiMatrix qfi_matrix_from_moments(const ModeUnitary& u, std::span<const MomentSet> moments,
                                         std::span<const int> phase_modes) {
  const auto d = static_cast<Eigen::Index>(phase_modes.size());
  if (d == 0) throw ValidationError("need at least one phase mode");
  std::vector<double> e(static_cast<std::size_t>(d), 0.0);
  const auto fw = [&] { return detail::fw_terms_raw(u, moments, phase_modes, e).fw(); };
  Eigen::VectorXd diag(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    diag[j] = fw();
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  Eigen::MatrixXd f = diag.asDiagonal();
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      e[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(k)] = 1.0;
      f(j, k) = f(k, j) = 0.5 * (fw() - diag[j] - diag[k]);
      e[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(k)] = 0.0;
    }
  }
  return QfiMatrix(std::move(f));
}

/// Cramér-Rao sensitivity √(wᵀ F⁺ w), with F inverted on the eigenvectors
/// whose eigenvalue exceeds support_threshold · λ_max.
inline double crb_delta_q(const QfiMatrix& f, const WeightVector& w,
                          double kernel_tolerance = kKernelOverlapTolerance) {
  f.check(w);
  const Eigen::Map<const Eigen::VectorXd> v(w.values().data(), w.d());
  const auto& lambda = f.eigenvalues();
  const auto& vecs = f.eigenvectors();
  const double top = lambda.maxCoeff();
  const double cut = top > 0.0 ? f.support_threshold() * top : 0.0;

  double kernel_overlap = 0.0;
  double worst = -1.0;
  Eigen::Index worst_index = 0;
  double value = 0.0;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const double proj = vecs.col(k).dot(v);
    if (top > 0.0 && lambda[k] > cut) {
      value += proj * proj / lambda[k];
    } else {
      kernel_overlap += proj * proj;
      if (std::abs(proj) > worst) {
        worst = std::abs(proj);
        worst_index = k;
      }
    }
  }
  if (std::sqrt(kernel_overlap) > kernel_tolerance * v.norm()) {
    std::ostringstream msg;
    msg << "estimation impossible: w overlaps the kernel of F along (";
    for (Eigen::Index j = 0; j < vecs.rows(); ++j) msg << (j ? ", " : "") << vecs(j, worst_index);
    msg << ") by " << std::sqrt(kernel_overlap);
    throw EstimationImpossible(msg.str());
  }
  return std::sqrt(value);
}

/// |w|² / √F_w: the weaker single-number bound obtained by Cauchy-Schwarz.
inline double crb_cauchy_schwarz(double fw, const WeightVector& w) {
  if (!(fw > 0.0)) throw ValidationError("Cauchy-Schwarz bound needs F_w > 0");
  return w.norm_squared() / std::sqrt(fw);
}

}  // namespace distmet
