// Copyright 2026 The nmzi Authors
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

/**
 * @file
 * Probe coupling models: local qubit probes, the nonlocal probe w spanning
 * both inner arms, and discretized Gaussian pointers.
 *
 * A qubit probe coupled to path X undergoes the controlled rotation
 *
 *     |0⟩ -> √(1−ε)|0⟩ + √ε|1⟩,   |1⟩ -> −√ε|0⟩ + √(1−ε)|1⟩
 *
 * whenever the particle occupies X, so ε is the click probability given
 * presence. The excitation amplitude is +√ε in every arm; any relative sign
 * between arms after post-selection comes from the interferometer.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nmzi/paths.hpp"
#include "nmzi/statevec.hpp"

namespace nmzi {

enum class ProbeModel { qubit_local, qubit_nonlocal_w, pointer_gaussian };

inline std::string_view to_string(ProbeModel m) {
  switch (m) {
    case ProbeModel::qubit_local: return "qubit-local";
    case ProbeModel::qubit_nonlocal_w: return "qubit-nonlocal-w";
    case ProbeModel::pointer_gaussian: return "pointer-gaussian";
  }
  return "?";
}

inline ProbeModel parse_probe_model(std::string_view s) {
  if (s == "qubit-local") return ProbeModel::qubit_local;
  if (s == "qubit-nonlocal-w") return ProbeModel::qubit_nonlocal_w;
  if (s == "pointer-gaussian") return ProbeModel::pointer_gaussian;
  throw std::invalid_argument("unknown probe model '" + std::string(s) + "'");
}

/// Pointer grid: `bins` points spanning ±extent·width, ready state
/// ψ(x) ∝ exp(−x²/4σ²) so that |ψ|² has standard deviation σ = width.
struct PointerParams {
  double shift = 0.0;
  double width = 1.0;
  double extent = 8.0;
  std::size_t bins = 257;

  [[nodiscard]] double spacing() const {
    return 2.0 * extent * width / static_cast<double>(bins - 1);
  }
  auto operator<=>(const PointerParams&) const = default;
};

struct ProbeConfig {
  std::string id;
  ProbeModel model = ProbeModel::qubit_local;
  /// Local qubit: one path. Pointer: one or more paths. Nonlocal w: ignored,
  /// arms are controlled by arm_b / arm_c.
  std::vector<PathLabel> paths;
  bool arm_b = true;
  bool arm_c = true;
  double epsilon = 0.0;
  PointerParams pointer{};

  static ProbeConfig qubit(std::string id, PathLabel path, double epsilon) {
    return {std::move(id), ProbeModel::qubit_local, {path}, true, true, epsilon, {}};
  }
  static ProbeConfig nonlocal_w(std::string id, double epsilon, bool arm_b = true,
                                bool arm_c = true) {
    return {std::move(id), ProbeModel::qubit_nonlocal_w, {}, arm_b, arm_c, epsilon, {}};
  }
  static ProbeConfig gaussian_pointer(std::string id, std::vector<PathLabel> paths,
                                      double shift, double width) {
    ProbeConfig p{std::move(id), ProbeModel::pointer_gaussian, std::move(paths), true, true, 0.0,
                  {}};
    p.pointer.shift = shift;
    p.pointer.width = width;
    return p;
  }

  [[nodiscard]] bool is_qubit() const { return model != ProbeModel::pointer_gaussian; }

  /// Paths on which presence of the particle drives the coupling.
  [[nodiscard]] std::vector<PathLabel> coupled_paths() const {
    if (model != ProbeModel::qubit_nonlocal_w) return paths;
    std::vector<PathLabel> out;
    if (arm_b) out.push_back(PathLabel::B);
    if (arm_c) out.push_back(PathLabel::C);
    return out;
  }

  [[nodiscard]] std::size_t dim() const { return is_qubit() ? 2 : pointer.bins; }

  bool operator==(const ProbeConfig&) const = default;
};

inline void validate(const ProbeConfig& p) {
  if (p.id.empty()) throw std::invalid_argument("probe id must not be empty");
  const std::string who = "probe '" + p.id + "': ";
  switch (p.model) {
    case ProbeModel::qubit_local:
      if (p.paths.size() != 1) throw std::invalid_argument(who + "local probe needs exactly one path");
      break;
    case ProbeModel::qubit_nonlocal_w:
      break;
    case ProbeModel::pointer_gaussian: {
      if (p.paths.empty()) throw std::invalid_argument(who + "pointer needs at least one path");
      detail::require_distinct(p.paths, who + "pointer paths");
      const auto& q = p.pointer;
      if (!(q.width > 0.0) || !(q.extent > 0.0) || !std::isfinite(q.shift)) {
        throw std::invalid_argument(who + "pointer width/extent must be positive");
      }
      if (q.bins < 3 || q.bins % 2 == 0) {
        throw std::invalid_argument(who + "pointer bin count must be odd and >= 3");
      }
      if (q.width < 2.0 * q.spacing()) {
        throw std::invalid_argument(who + "pointer grid too coarse: width spans fewer than 2 bins");
      }
      return;
    }
  }
  if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0)) {
    throw std::invalid_argument(who + "epsilon must lie in [0, 1], got " +
                                std::to_string(p.epsilon));
  }
}

class ProbeSet {
 public:
  ProbeSet() = default;
  ProbeSet(std::initializer_list<ProbeConfig> probes) {
    for (const auto& p : probes) add(p);
  }

  ProbeSet& add(ProbeConfig p) {
    validate(p);
    for (const auto& q : probes_) {
      if (q.id == p.id) throw std::invalid_argument("duplicate probe id '" + p.id + "'");
      if (q.model != p.model) continue;
      for (PathLabel a : q.coupled_paths()) {
        const auto cp = p.coupled_paths();
        if (std::find(cp.begin(), cp.end(), a) != cp.end()) {
          throw std::invalid_argument("probes '" + q.id + "' and '" + p.id +
                                      "' share model and path " + std::string(to_string(a)));
        }
      }
    }
    probes_.push_back(std::move(p));
    return *this;
  }

  [[nodiscard]] std::size_t size() const { return probes_.size(); }
  [[nodiscard]] bool empty() const { return probes_.empty(); }
  [[nodiscard]] const ProbeConfig& operator[](std::size_t i) const { return probes_.at(i); }
  [[nodiscard]] auto begin() const { return probes_.begin(); }
  [[nodiscard]] auto end() const { return probes_.end(); }

  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view id) const {
    for (std::size_t i = 0; i < probes_.size(); ++i) {
      if (probes_[i].id == id) return i;
    }
    return std::nullopt;
  }

  [[nodiscard]] std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& p : probes_) d.push_back(p.dim());
    return d;
  }

  [[nodiscard]] bool all_qubits() const {
    return std::all_of(probes_.begin(), probes_.end(), [](const auto& p) { return p.is_qubit(); });
  }

  /// Copy with every qubit probe's strength set to `epsilon`.
  [[nodiscard]] ProbeSet with_epsilon(double epsilon) const {
    ProbeSet out;
    for (auto p : probes_) {
      if (p.is_qubit()) p.epsilon = epsilon;
      out.add(std::move(p));
    }
    return out;
  }

  [[nodiscard]] ProbeSet permuted(std::span<const std::size_t> perm) const {
    ProbeSet out;
    for (std::size_t j : perm) out.add(probes_.at(j));
    return out;
  }

  bool operator==(const ProbeSet&) const = default;

 private:
  std::vector<ProbeConfig> probes_;
};

/// The seven local probes of the counting experiment, one per path.
inline ProbeSet seven_local_probes(double epsilon) {
  ProbeSet set;
  for (PathLabel p : {PathLabel::S, PathLabel::A, PathLabel::B, PathLabel::C, PathLabel::D,
                      PathLabel::E, PathLabel::F}) {
    set.add(ProbeConfig::qubit(std::string(to_string(p)), p, epsilon));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Pointer grid

inline std::vector<double> pointer_grid(const PointerParams& q) {
  const double h = q.spacing();
  const double x0 = -q.extent * q.width;
  std::vector<double> x(q.bins);
  for (std::size_t i = 0; i < q.bins; ++i) x[i] = x0 + h * static_cast<double>(i);
  x[q.bins / 2] = 0.0;
  return x;
}

inline CVector ready_state(const ProbeConfig& p) {
  if (p.is_qubit()) {
    CVector v = CVector::Zero(2);
    v(0) = 1.0;
    return v;
  }
  const auto x = pointer_grid(p.pointer);
  CVector v(static_cast<Eigen::Index>(x.size()));
  const double s = p.pointer.width;
  for (std::size_t i = 0; i < x.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = std::exp(-x[i] * x[i] / (4.0 * s * s));
  }
  return v / v.norm();
}

/// Band-limited translation by `shift` on the periodic grid: F† diag(e^{−ikδ}) F.
/// With an odd bin count the symmetric frequency set makes this a real
/// orthogonal (circulant) matrix.
inline CMatrix pointer_translation(const PointerParams& q) {
  const auto n = static_cast<long>(q.bins);
  const long half = (n - 1) / 2;
  const double frac = q.shift / q.spacing();
  std::vector<double> kernel(static_cast<std::size_t>(2 * n - 1));
  for (long d = -(n - 1); d <= n - 1; ++d) {
    double acc = 1.0;
    for (long m = 1; m <= half; ++m) {
      acc += 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) *
                            (static_cast<double>(d) - frac) / static_cast<double>(n));
    }
    kernel[static_cast<std::size_t>(d + n - 1)] = acc / static_cast<double>(n);
  }
  CMatrix u(n, n);
  for (long j = 0; j < n; ++j) {
    for (long l = 0; l < n; ++l) u(j, l) = kernel[static_cast<std::size_t>(j - l + n - 1)];
  }
  return u;
}

// ---------------------------------------------------------------------------
// Couplings

/// Block-diagonal coupling on (path presence × probe): identity when the
/// particle is elsewhere, `on_present` when it occupies one of `control`.
struct CouplingUnitary {
  std::vector<PathLabel> control;
  CMatrix on_present;

  /// 2d×2d matrix, absent block first.
  [[nodiscard]] CMatrix full() const {
    const auto d = on_present.rows();
    CMatrix m = CMatrix::Zero(2 * d, 2 * d);
    m.topLeftCorner(d, d) = CMatrix::Identity(d, d);
    m.bottomRightCorner(d, d) = on_present;
    return m;
  }
};

inline CMatrix qubit_rotation(double epsilon) {
  const double c = std::sqrt(1.0 - epsilon);
  const double s = std::sqrt(epsilon);
  CMatrix r(2, 2);
  r << c, -s, s, c;
  return r;
}

inline CouplingUnitary coupling_unitary(const ProbeConfig& p) {
  validate(p);
  if (p.is_qubit()) return {p.coupled_paths(), qubit_rotation(p.epsilon)};
  return {p.coupled_paths(), pointer_translation(p.pointer)};
}

inline ProbeConfig c_only_variant(const ProbeConfig& w) {
  if (w.model != ProbeModel::qubit_nonlocal_w) {
    throw std::invalid_argument("c_only_variant needs a nonlocal w probe, got '" + w.id + "'");
  }
  ProbeConfig out = w;
  out.arm_b = false;
  out.arm_c = true;
  return out;
}

inline ProbeConfig b_only_variant(const ProbeConfig& w) {
  if (w.model != ProbeModel::qubit_nonlocal_w) {
    throw std::invalid_argument("b_only_variant needs a nonlocal w probe, got '" + w.id + "'");
  }
  ProbeConfig out = w;
  out.arm_b = true;
  out.arm_c = false;
  return out;
}

}  // namespace nmzi
