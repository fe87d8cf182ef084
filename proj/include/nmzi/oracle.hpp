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
 * Brute-force path enumeration. Every classical route through the network is
 * followed with its probe outcomes, and the branch amplitude is the product of
 * the splitter coefficients, phase factors and per-probe factors met along
 * the way. Probabilities come from coherently summing branches that end in
 * the same (outcomes, detector) record.
 *
 * Only the element coefficient definitions are shared with the state-vector
 * engine; this file never calls into evolution, couplings or partial traces.
 */
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nmzi/interferometer.hpp"
#include "nmzi/probes.hpp"
#include "nmzi/statevec.hpp"

namespace nmzi::oracle {

struct Branch {
  std::vector<PathLabel> route;
  std::vector<std::uint32_t> outcomes;
  Complex amplitude{1.0, 0.0};

  [[nodiscard]] PathLabel end() const { return route.back(); }
  [[nodiscard]] std::string route_string() const {
    std::string s;
    for (PathLabel p : route) {
      if (!s.empty()) s += "->";
      s += to_string(p);
    }
    return s;
  }
};

/// Key for coherent summation: final outcomes and where the particle ended.
struct Record {
  std::vector<std::uint32_t> outcomes;
  PathLabel end = PathLabel::DET1;

  auto operator<=>(const Record&) const = default;
};

namespace detail {

/// Qubit probe factor ⟨to| R(ε) |from⟩, written out independently of the
/// coupling code.
inline double probe_factor(double epsilon, std::uint32_t from, std::uint32_t to) {
  const double stay = std::sqrt(1.0 - epsilon);
  const double flip = std::sqrt(epsilon);
  if (from == to) return stay;
  return to == 1 ? flip : -flip;
}

inline bool couples(const ProbeConfig& p, PathLabel x) {
  switch (p.model) {
    case ProbeModel::qubit_local:
      return p.paths.front() == x;
    case ProbeModel::qubit_nonlocal_w:
      return (x == PathLabel::B && p.arm_b) || (x == PathLabel::C && p.arm_c);
    case ProbeModel::pointer_gaussian:
      break;
  }
  return false;
}

/// Splits every branch on each probe that sees the particle on its latest label.
inline std::vector<Branch> visit_probes(std::vector<Branch> branches, const ProbeSet& probes) {
  for (std::size_t k = 0; k < probes.size(); ++k) {
    std::vector<Branch> next;
    next.reserve(branches.size() * 2);
    for (auto& b : branches) {
      if (!couples(probes[k], b.end())) {
        next.push_back(std::move(b));
        continue;
      }
      for (std::uint32_t to : {0u, 1u}) {
        Branch c = b;
        c.amplitude *= probe_factor(probes[k].epsilon, b.outcomes[k], to);
        c.outcomes[k] = to;
        next.push_back(std::move(c));
      }
    }
    branches = std::move(next);
  }
  return branches;
}

}  // namespace detail

/// Every (route, outcome tuple) with its amplitude. Qubit probes only.
inline std::vector<Branch> enumerate_branches(const InterferometerSpec& spec,
                                              const ProbeSet& probes) {
  for (const auto& p : probes) {
    if (!p.is_qubit()) {
      throw std::invalid_argument("oracle supports qubit probes only; '" + p.id +
                                  "' is a pointer");
    }
    validate(p);
  }
  std::vector<Branch> branches{
      Branch{{spec.source}, std::vector<std::uint32_t>(probes.size(), 0), {1.0, 0.0}}};
  branches = detail::visit_probes(std::move(branches), probes);

  for (const Element& e : spec.elements) {
    std::vector<Branch> next;
    std::vector<Branch> moved;  // branches whose label changed and need probe visits
    for (auto& b : branches) {
      if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
        auto it = std::find(bs->inputs.begin(), bs->inputs.end(), b.end());
        if (it == bs->inputs.end()) {
          next.push_back(std::move(b));
          continue;
        }
        const auto j = std::distance(bs->inputs.begin(), it);
        for (int i = 0; i < 2; ++i) {
          const Complex c = bs->matrix(i, j);
          if (c == Complex{}) continue;
          Branch n = b;
          n.route.push_back(bs->outputs[static_cast<std::size_t>(i)]);
          n.amplitude *= c;
          moved.push_back(std::move(n));
        }
      } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
        if (b.end() == ph->path) b.amplitude *= phase_factor(*ph, spec.inner_phase);
        next.push_back(std::move(b));
      } else {
        const auto& dm = std::get<DetectorMap>(e);
        if (b.end() == dm.port) {
          b.route.push_back(dm.detector);
          moved.push_back(std::move(b));
        } else {
          next.push_back(std::move(b));
        }
      }
    }
    moved = detail::visit_probes(std::move(moved), probes);
    for (auto& m : moved) next.push_back(std::move(m));
    branches = std::move(next);
  }
  return branches;
}

/// Coherent sum of branch amplitudes per (outcomes, end label).
inline std::map<Record, Complex> record_amplitudes(const std::vector<Branch>& branches) {
  std::map<Record, Complex> out;
  for (const auto& b : branches) out[{b.outcomes, b.end()}] += b.amplitude;
  return out;
}

inline double oracle_probability(const std::vector<Branch>& branches,
                                 const std::function<bool(const Record&)>& predicate) {
  double p = 0.0;
  for (const auto& [rec, amp] : record_amplitudes(branches)) {
    if (predicate(rec)) p += std::norm(amp);
  }
  return p;
}

inline std::map<Record, double> record_probabilities(const std::vector<Branch>& branches) {
  std::map<Record, double> out;
  for (const auto& [rec, amp] : record_amplitudes(branches)) out[rec] = std::norm(amp);
  return out;
}

/// Reduced state of probe k given the particle ends at `detector`, built
/// directly from the record amplitudes.
inline DensityMatrix conditional_probe_state(const std::vector<Branch>& branches, std::size_t k,
                                             PathLabel detector) {
  const auto amps = record_amplitudes(branches);
  std::map<std::vector<std::uint32_t>, std::array<Complex, 2>> env;
  for (const auto& [rec, a] : amps) {
    if (rec.end != detector) continue;
    auto rest = rec.outcomes;
    const auto o = rest.at(k);
    rest[k] = 0;
    env[rest][o] += a;
  }
  CMatrix rho = CMatrix::Zero(2, 2);
  for (const auto& [rest, v] : env) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) rho(i, j) += v[i] * std::conj(v[j]);
    }
  }
  const double tr = rho.trace().real();
  if (!(tr > 1e-300)) throw SimulationError("detector is never reached; conditional state undefined");
  rho /= tr;
  return DensityMatrix(rho);
}

}  // namespace nmzi::oracle
