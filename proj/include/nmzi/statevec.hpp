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
 * Sparse amplitude bookkeeping over the particle-path x probe-register
 * product space, plus the reduced-state and distance measures used to
 * quantify the trace a particle leaves in each probe.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nmzi/paths.hpp"

namespace nmzi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kPipelineTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kPruneThreshold = 1e-15;

/// Domain failures that are not caller misuse: impossible post-selection
/// branches, undefined weak values, traces below numerical precision.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BasisLabel {
  PathLabel path = PathLabel::S;
  std::vector<std::uint32_t> outcomes;

  auto operator<=>(const BasisLabel&) const = default;
};

/// ‖u†u − I‖ in the max-entry norm.
inline double unitarity_deviation(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const CMatrix gram = u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols());
  return gram.cwiseAbs().maxCoeff();
}

inline void require_unitary(const CMatrix& u, std::string_view what) {
  const double dev = unitarity_deviation(u);
  if (!(dev <= kUnitaryTol)) {
    std::ostringstream os;
    os << what << " is not unitary: ||u^dagger u - I|| = " << dev;
    throw std::invalid_argument(os.str());
  }
}

class JointState {
 public:
  using Map = std::map<BasisLabel, Complex>;

  JointState() = default;
  explicit JointState(std::vector<std::size_t> probe_dims)
      : probe_dims_(std::move(probe_dims)) {}

  /// |path⟩ ⊗ ready_0 ⊗ ready_1 ⊗ ...
  static JointState product(PathLabel path, std::span<const CVector> ready) {
    std::vector<std::size_t> dims;
    dims.reserve(ready.size());
    for (const auto& r : ready) dims.push_back(static_cast<std::size_t>(r.size()));
    JointState state(dims);
    std::vector<std::uint32_t> idx(ready.size(), 0);
    // odometer over the product of ready-state supports
    while (true) {
      Complex amp{1.0, 0.0};
      for (std::size_t k = 0; k < ready.size(); ++k) amp *= ready[k](idx[k]);
      if (std::abs(amp) >= kPruneThreshold) state.amps_[{path, idx}] = amp;
      std::size_t k = 0;
      for (; k < ready.size(); ++k) {
        if (++idx[k] < dims[k]) break;
        idx[k] = 0;
      }
      if (k == ready.size()) break;
    }
    return state;
  }

  static JointState basis(PathLabel path, std::vector<std::size_t> probe_dims) {
    JointState state(probe_dims);
    state.amps_[{path, std::vector<std::uint32_t>(probe_dims.size(), 0)}] = 1.0;
    return state;
  }

  [[nodiscard]] std::size_t num_probes() const { return probe_dims_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& probe_dims() const { return probe_dims_; }
  [[nodiscard]] const Map& amplitudes() const { return amps_; }
  [[nodiscard]] std::size_t size() const { return amps_.size(); }
  [[nodiscard]] auto begin() const { return amps_.begin(); }
  [[nodiscard]] auto end() const { return amps_.end(); }

  [[nodiscard]] Complex amplitude(const BasisLabel& label) const {
    auto it = amps_.find(label);
    return it == amps_.end() ? Complex{} : it->second;
  }

  /// Total amplitude weight sitting on one path label.
  [[nodiscard]] double path_probability(PathLabel p) const {
    double acc = 0.0;
    for (const auto& [label, a] : amps_) {
      if (label.path == p) acc += std::norm(a);
    }
    return acc;
  }

  [[nodiscard]] double norm2() const {
    double acc = 0.0;
    for (const auto& [label, a] : amps_) acc += std::norm(a);
    return acc;
  }

  void set(BasisLabel label, Complex a) {
    if (label.outcomes.size() != probe_dims_.size()) {
      throw std::invalid_argument("basis label has wrong number of probe outcomes");
    }
    for (std::size_t k = 0; k < probe_dims_.size(); ++k) {
      if (label.outcomes[k] >= probe_dims_[k]) {
        throw std::out_of_range("probe outcome index out of range");
      }
    }
    amps_[std::move(label)] = a;
  }

  void add(const BasisLabel& label, Complex a) { amps_[label] += a; }

  void prune(double threshold = kPruneThreshold) {
    std::erase_if(amps_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
  }

  [[nodiscard]] JointState normalized() const {
    const double n2 = norm2();
    if (!(n2 > 0.0)) throw SimulationError("cannot normalize a zero state");
    JointState out = *this;
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& [label, a] : out.amps_) a *= scale;
    return out;
  }

  /// Reorders the probe registers: new register j is old register perm[j].
  [[nodiscard]] JointState permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != num_probes()) throw std::invalid_argument("permutation size mismatch");
    std::vector<std::size_t> dims(perm.size());
    for (std::size_t j = 0; j < perm.size(); ++j) dims[j] = probe_dims_.at(perm[j]);
    JointState out(dims);
    for (const auto& [label, a] : amps_) {
      BasisLabel l{label.path, std::vector<std::uint32_t>(perm.size())};
      for (std::size_t j = 0; j < perm.size(); ++j) l.outcomes[j] = label.outcomes[perm[j]];
      out.amps_[std::move(l)] = a;
    }
    return out;
  }

 private:
  std::vector<std::size_t> probe_dims_;
  Map amps_;
};

/// ⟨a|b⟩
inline Complex inner(const JointState& a, const JointState& b) {
  Complex acc{};
  for (const auto& [label, amp] : a) acc += std::conj(amp) * b.amplitude(label);
  return acc;
}

// ---------------------------------------------------------------------------
// Local unitaries

struct PathSubsystem {
  std::vector<PathLabel> paths;
};
struct ProbeSubsystem {
  std::size_t index = 0;
};
using Subsystem = std::variant<PathSubsystem, ProbeSubsystem>;

namespace detail {

inline std::ptrdiff_t position_of(std::span<const PathLabel> labels, PathLabel p) {
  auto it = std::find(labels.begin(), labels.end(), p);
  return it == labels.end() ? -1 : std::distance(labels.begin(), it);
}

inline void require_distinct(std::span<const PathLabel> labels, std::string_view what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) {
        throw std::invalid_argument(std::string(what) + " lists path " +
                                    std::string(to_string(labels[i])) + " twice");
      }
    }
  }
}

}  // namespace detail

/// Linear transfer of path amplitude: amplitude on inputs[j] is sent to
/// Σ_i u(i, j) |outputs[i]⟩. `u` must be square unitary with at least as many
/// columns as inputs; unused columns correspond to unoccupied (vacuum) ports.
/// Labels outside `inputs` are untouched.
inline JointState transfer_paths(const JointState& state, std::span<const PathLabel> inputs,
                                 std::span<const PathLabel> outputs, const CMatrix& u) {
  require_unitary(u, "path transfer matrix");
  if (static_cast<std::size_t>(u.rows()) != outputs.size() ||
      inputs.size() > static_cast<std::size_t>(u.cols()) || inputs.empty()) {
    throw std::invalid_argument("path transfer matrix shape does not match the port lists");
  }
  detail::require_distinct(inputs, "transfer inputs");
  detail::require_distinct(outputs, "transfer outputs");

  JointState out(state.probe_dims());
  for (const auto& [label, a] : state) {
    const auto j = detail::position_of(inputs, label.path);
    if (j < 0) {
      out.add(label, a);
      continue;
    }
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      const Complex c = u(static_cast<Eigen::Index>(i), j);
      if (c == Complex{}) continue;
      out.add(BasisLabel{outputs[i], label.outcomes}, c * a);
    }
  }
  out.prune();
  return out;
}

namespace detail {

/// Applies `u` to probe register `k` for every entry accepted by `filter`.
template <typename Filter>
JointState apply_on_probe(const JointState& state, std::size_t k, const CMatrix& u, Filter filter) {
  if (k >= state.num_probes()) {
    throw std::out_of_range("probe index " + std::to_string(k) + " out of range (" +
                            std::to_string(state.num_probes()) + " probes)");
  }
  const auto dim = static_cast<Eigen::Index>(state.probe_dims()[k]);
  if (u.rows() != dim || u.cols() != dim) {
    throw std::invalid_argument("probe unitary dimension does not match probe register");
  }
  JointState out(state.probe_dims());
  for (const auto& [label, a] : state) {
    if (!filter(label)) {
      out.add(label, a);
      continue;
    }
    const auto col = static_cast<Eigen::Index>(label.outcomes[k]);
    BasisLabel target = label;
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Complex c = u(row, col);
      if (c == Complex{}) continue;
      target.outcomes[k] = static_cast<std::uint32_t>(row);
      out.add(target, c * a);
    }
  }
  out.prune();
  return out;
}

}  // namespace detail

inline JointState apply_local_unitary(const JointState& state, const Subsystem& subsystem,
                                      const CMatrix& u) {
  require_unitary(u, "local unitary");
  if (const auto* ps = std::get_if<PathSubsystem>(&subsystem)) {
    if (static_cast<std::size_t>(u.rows()) != ps->paths.size()) {
      throw std::invalid_argument("path unitary dimension does not match the selected paths");
    }
    return transfer_paths(state, ps->paths, ps->paths, u);
  }
  const auto k = std::get<ProbeSubsystem>(subsystem).index;
  return detail::apply_on_probe(state, k, u, [](const BasisLabel&) { return true; });
}

/// Controlled coupling: `u` acts on probe `k` only on branches whose path is
/// one of `control`.
inline JointState apply_controlled_unitary(const JointState& state,
                                           std::span<const PathLabel> control, std::size_t k,
                                           const CMatrix& u) {
  require_unitary(u, "controlled unitary");
  return detail::apply_on_probe(state, k, u, [control](const BasisLabel& l) {
    return std::find(control.begin(), control.end(), l.path) != control.end();
  });
}

// ---------------------------------------------------------------------------
// Density matrices

class DensityMatrix {
 public:
  /// Validates hermiticity, unit trace and positivity at `tol`.
  explicit DensityMatrix(CMatrix m, double tol = kAlgebraicTol) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols()) {
      throw std::invalid_argument("density matrix must be square and non-empty");
    }
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(m_.trace() - Complex{1.0}) > tol) {
      throw std::invalid_argument("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
      throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
  }

  static DensityMatrix pure(const CVector& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw std::invalid_argument("cannot build a pure state from a zero vector");
    const CVector v = psi / n;
    return DensityMatrix(v * v.adjoint());
  }

  /// |index⟩⟨index|
  static DensityMatrix basis(std::size_t dim, std::size_t index) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return pure(v);
  }

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  [[nodiscard]] const CMatrix& matrix() const { return m_; }
  [[nodiscard]] Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  [[nodiscard]] double purity() const { return (m_ * m_).trace().real(); }
  [[nodiscard]] bool is_pure(double tol = kAlgebraicTol) const { return purity() > 1.0 - tol; }

  [[nodiscard]] Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  /// Dominant eigenvector, phase-fixed so its first non-negligible entry is
  /// real and positive. Meaningful for pure states.
  [[nodiscard]] CVector dominant_vector() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m_);
    CVector v = es.eigenvectors().col(m_.rows() - 1);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-8) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    return v;
  }

 private:
  CMatrix m_;
};

inline DensityMatrix partial_trace_probe(const JointState& state, std::size_t k) {
  if (k >= state.num_probes()) {
    throw std::out_of_range("probe index " + std::to_string(k) + " out of range");
  }
  const double n2 = state.norm2();
  if (std::abs(n2 - 1.0) > kPipelineTol) {
    std::ostringstream os;
    os << "partial trace needs a normalized state (norm^2 = " << n2 << ")";
    throw std::invalid_argument(os.str());
  }
  const auto dim = static_cast<Eigen::Index>(state.probe_dims()[k]);
  // group amplitudes by the environment of probe k: (path, other outcomes)
  std::map<BasisLabel, std::vector<std::pair<Eigen::Index, Complex>>> groups;
  for (const auto& [label, a] : state) {
    BasisLabel env = label;
    env.outcomes[k] = 0;
    groups[env].emplace_back(static_cast<Eigen::Index>(label.outcomes[k]), a);
  }
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& [env, entries] : groups) {
    for (const auto& [i, ai] : entries) {
      for (const auto& [j, aj] : entries) rho(i, j) += ai * std::conj(aj);
    }
  }
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("dimension mismatch");
  const CMatrix diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

namespace detail {

/// 1 − F(ρ, σ) for pure σ = |φ⟩⟨φ|, evaluated as tr(ρ (I − |φ⟩⟨φ|)) so that
/// tiny infidelities survive rounding.
inline double infidelity_with_pure(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const CVector phi = sigma.dominant_vector();
  const auto n = static_cast<Eigen::Index>(rho.dim());
  const CMatrix complement = CMatrix::Identity(n, n) - phi * phi.adjoint();
  return std::clamp((rho.matrix() * complement).trace().real(), 0.0, 1.0);
}

}  // namespace detail

/// Uhlmann fidelity (tr √(√ρ σ √ρ))².
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(rho.dim()) +
                                " vs " + std::to_string(sigma.dim()) + ")");
  }
  if (sigma.is_pure()) return 1.0 - detail::infidelity_with_pure(rho, sigma);
  if (rho.is_pure()) return 1.0 - detail::infidelity_with_pure(sigma, rho);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_rho = es.eigenvectors() * lam.cast<Complex>().asDiagonal() *
                           es.eigenvectors().adjoint();
  CMatrix m = sqrt_rho * sigma.matrix() * sqrt_rho;
  m = 0.5 * (m + m.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es2(m, Eigen::EigenvaluesOnly);
  const double root = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

/// arccos √F(ρ, σ), in [0, π/2].
inline double bures_angle(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("bures_angle: dimension mismatch (" + std::to_string(rho.dim()) +
                                " vs " + std::to_string(sigma.dim()) + ")");
  }
  double one_minus_f = 0.0;
  if (sigma.is_pure()) {
    one_minus_f = detail::infidelity_with_pure(rho, sigma);
  } else if (rho.is_pure()) {
    one_minus_f = detail::infidelity_with_pure(sigma, rho);
  } else {
    one_minus_f = 1.0 - fidelity(rho, sigma);
  }
  one_minus_f = std::clamp(one_minus_f, 0.0, 1.0);
  // asin branch keeps precision when the angle is small
  if (one_minus_f < 0.5) return std::asin(std::sqrt(one_minus_f));
  return std::acos(std::sqrt(1.0 - one_minus_f));
}

}  // namespace nmzi
