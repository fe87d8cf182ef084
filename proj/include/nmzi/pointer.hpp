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

#pragma once

#include <string>
#include <vector>

#include "nmzi/analysis.hpp"

namespace nmzi {

/// Conditional state of a Gaussian pointer after post-selection.
struct PointerReadout {
  std::vector<double> grid;
  DensityMatrix state;
  /// Set when the conditional pointer state is pure.
  std::optional<CVector> wavefunction;
  double mean = 0.0;
  /// Bures angle relative to the ready Gaussian.
  double bures_angle = 0.0;
  std::vector<std::string> warnings;
};

/// Reads pointer register k out of a post-selected joint state.
inline PointerReadout gaussian_pointer_state(const JointState& conditional, const ProbeSet& probes,
                                             std::size_t k) {
  const ProbeConfig& p = probes[k];
  if (p.model != ProbeModel::pointer_gaussian) {
    throw std::invalid_argument("probe '" + p.id + "' is not a Gaussian pointer");
  }
  validate(p);
  PointerReadout r{pointer_grid(p.pointer), partial_trace_probe(conditional, k), std::nullopt, 0.0,
                   0.0, {}};
  if (std::abs(p.pointer.shift) > 0.1 * p.pointer.width) {
    r.warnings.push_back("pointer '" + p.id + "': shift is not small against the width; "
                         "outside the weak regime");
  }
  for (std::size_t i = 0; i < r.grid.size(); ++i) r.mean += r.grid[i] * r.state(i, i).real();
  if (r.state.is_pure(1e-10)) r.wavefunction = r.state.dominant_vector();
  r.bures_angle = bures_angle(r.state, DensityMatrix::pure(ready_state(p)));
  return r;
}

inline PointerReadout gaussian_pointer_state(const InterferometerSpec& spec, const ProbeSet& probes,
                                             std::size_t k, PathLabel detector = PathLabel::DET1) {
  const auto post = postselect(forward_evolve(spec, probes), detector);
  return gaussian_pointer_state(post.conditional, probes, k);
}

}  // namespace nmzi
