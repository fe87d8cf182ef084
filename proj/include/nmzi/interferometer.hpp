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
 * Nested Mach-Zehnder network as an ordered element list.
 *
 *            +------------- A --------------------+
 *   S -[BS1]-+                                    +-[BS4]- F -> DET1
 *            +- D -[BS2]-+- B -(phi)-+            |     \
 *                        |           +-[BS3]- E --+      DET2
 *                        +- C -------+      \
 *                                            G
 *
 * With the inner phase at 0 the inner interferometer sends everything to G
 * and nothing to E.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nmzi/paths.hpp"
#include "nmzi/probes.hpp"
#include "nmzi/statevec.hpp"

namespace nmzi {

/// Two-port splitter. Amplitude on inputs[j] goes to Σ_i matrix(i, j) |outputs[i]⟩.
/// A single listed input means the second input port is unoccupied.
struct BeamSplitter {
  std::vector<PathLabel> inputs;
  std::array<PathLabel, 2> outputs{};
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();

  bool operator==(const BeamSplitter& o) const {
    return inputs == o.inputs && outputs == o.outputs && matrix == o.matrix;
  }
};

/// e^{i(phase + inner_phase·tunable)} on one path.
struct PhaseShift {
  PathLabel path = PathLabel::B;
  double phase = 0.0;
  bool tunable = false;

  bool operator==(const PhaseShift&) const = default;
};

struct DetectorMap {
  PathLabel port = PathLabel::F;
  PathLabel detector = PathLabel::DET1;

  bool operator==(const DetectorMap&) const = default;
};

using Element = std::variant<BeamSplitter, PhaseShift, DetectorMap>;

/// Real splitter [[cosθ, sinθ], [sinθ, −cosθ]].
inline Eigen::Matrix2cd splitter_matrix(double theta) {
  Eigen::Matrix2cd m;
  m << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
  return m;
}

/// Same convention, given (cosθ, sinθ) directly so exact constants survive.
inline Eigen::Matrix2cd splitter_matrix(double c, double s) {
  Eigen::Matrix2cd m;
  m << c, s, s, -c;
  return m;
}

struct InterferometerSpec {
  std::string name = "custom";
  std::vector<Element> elements;
  PathLabel source = PathLabel::S;
  double inner_phase = 0.0;

  [[nodiscard]] InterferometerSpec with_inner_phase(double phi) const {
    InterferometerSpec s = *this;
    s.inner_phase = phi;
    return s;
  }

  bool operator==(const InterferometerSpec&) const = default;
};

/// Shared coefficient definition for phase elements (the oracle uses it too).
inline Complex phase_factor(const PhaseShift& p, double inner_phase) {
  return std::polar(1.0, p.phase + (p.tunable ? inner_phase : 0.0));
}

// ---------------------------------------------------------------------------
// Topology

/// Where each path label lives in element time: produced after element
/// `producer` (−1 for the source) and consumed by element `consumer`
/// (elements.size() if it survives to the end).
struct PathSlot {
  long producer = -1;
  long consumer = 0;
};

struct Topology {
  std::map<PathLabel, PathSlot> slots;

  [[nodiscard]] bool has(PathLabel p) const { return slots.contains(p); }
  [[nodiscard]] const PathSlot& slot(PathLabel p) const {
    auto it = slots.find(p);
    if (it == slots.end()) {
      throw std::invalid_argument("path " + std::string(to_string(p)) +
                                  " does not occur in the interferometer");
    }
    return it->second;
  }
};

namespace detail {

inline std::vector<PathLabel> element_inputs(const Element& e) {
  return std::visit(
      [](const auto& el) -> std::vector<PathLabel> {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) return el.inputs;
        else if constexpr (std::is_same_v<T, PhaseShift>) return {el.path};
        else return {el.port};
      },
      e);
}

inline std::vector<PathLabel> element_outputs(const Element& e) {
  return std::visit(
      [](const auto& el) -> std::vector<PathLabel> {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) return {el.outputs[0], el.outputs[1]};
        else if constexpr (std::is_same_v<T, PhaseShift>) return {el.path};
        else return {el.detector};
      },
      e);
}

}  // namespace detail

/// Checks unitarity and topological order; returns the lifetime of every label.
inline Topology analyze_topology(const InterferometerSpec& spec) {
  Topology topo;
  std::set<PathLabel> live{spec.source};
  topo.slots[spec.source] = {-1, static_cast<long>(spec.elements.size())};
  for (std::size_t i = 0; i < spec.elements.size(); ++i) {
    const Element& e = spec.elements[i];
    const std::string where = "element " + std::to_string(i) + ": ";
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
      if (bs->inputs.empty() || bs->inputs.size() > 2) {
        throw std::invalid_argument(where + "beamsplitter needs one or two inputs");
      }
      detail::require_distinct(bs->inputs, where + "beamsplitter inputs");
      if (bs->outputs[0] == bs->outputs[1]) {
        throw std::invalid_argument(where + "beamsplitter outputs must differ");
      }
      const double dev = unitarity_deviation(bs->matrix);
      if (dev > kAlgebraicTol) {
        throw std::invalid_argument(where + "beamsplitter matrix is not unitary (||u^dagger u - I|| = " +
                                    std::to_string(dev) + ")");
      }
    }
    if (const auto* dm = std::get_if<DetectorMap>(&e)) {
      if (!is_detector(dm->detector)) {
        throw std::invalid_argument(where + "detector map target must be DET1 or DET2");
      }
    }
    if (const auto* ph = std::get_if<PhaseShift>(&e); ph && !std::isfinite(ph->phase)) {
      throw std::invalid_argument(where + "phase must be finite");
    }
    const auto ins = detail::element_inputs(e);
    for (PathLabel p : ins) {
      if (!live.contains(p)) {
        throw std::invalid_argument(where + "input " + std::string(to_string(p)) +
                                    " is not produced by an earlier element or the source");
      }
    }
    if (std::holds_alternative<PhaseShift>(e)) continue;  // acts in place
    for (PathLabel p : ins) {
      live.erase(p);
      topo.slots[p].consumer = static_cast<long>(i);
    }
    for (PathLabel p : detail::element_outputs(e)) {
      if (topo.slots.contains(p)) {
        throw std::invalid_argument(where + "output " + std::string(to_string(p)) +
                                    " is produced twice");
      }
      live.insert(p);
      topo.slots[p] = {static_cast<long>(i), static_cast<long>(spec.elements.size())};
    }
  }
  for (PathLabel p : live) {
    if (!is_terminal(p)) {
      throw std::invalid_argument("path " + std::string(to_string(p)) +
                                  " is left open; network must end on DET1, DET2 or G");
    }
  }
  return topo;
}

inline void validate(const InterferometerSpec& spec) { (void)analyze_topology(spec); }

/// Coupling schedule: probe k is applied right after element `after[k]`
/// (−1 = before the first element), when all of its coupled paths are live.
struct ProbeSchedule {
  std::vector<long> after;
};

inline ProbeSchedule schedule_probes(const Topology& topo, const ProbeSet& probes) {
  ProbeSchedule sched;
  for (const auto& p : probes) {
    const auto paths = p.coupled_paths();
    long at = -1;
    long until = std::numeric_limits<long>::max();
    for (PathLabel x : paths) {
      if (!topo.has(x)) {
        throw std::invalid_argument("probe '" + p.id + "' sits on path " +
                                    std::string(to_string(x)) +
                                    ", which the interferometer does not have");
      }
      at = std::max(at, topo.slot(x).producer);
      until = std::min(until, topo.slot(x).consumer);
    }
    if (!paths.empty() && at >= until) {
      throw std::invalid_argument("probe '" + p.id + "' couples to paths that are never live together");
    }
    sched.after.push_back(at);
  }
  return sched;
}

namespace detail {

inline JointState apply_element(const JointState& state, const Element& e, double inner_phase) {
  if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
    return transfer_paths(state, bs->inputs, bs->outputs, bs->matrix);
  }
  if (const auto* ph = std::get_if<PhaseShift>(&e)) {
    CMatrix u(1, 1);
    u(0, 0) = phase_factor(*ph, inner_phase);
    const std::array<PathLabel, 1> p{ph->path};
    return transfer_paths(state, p, p, u);
  }
  const auto& dm = std::get<DetectorMap>(e);
  CMatrix u = CMatrix::Identity(1, 1);
  const std::array<PathLabel, 1> in{dm.port};
  const std::array<PathLabel, 1> out{dm.detector};
  return transfer_paths(state, in, out, u);
}

inline JointState apply_couplings(JointState state, const ProbeSet& probes,
                                  const ProbeSchedule& sched, long after) {
  for (std::size_t k = 0; k < probes.size(); ++k) {
    if (sched.after[k] != after) continue;
    const auto cu = coupling_unitary(probes[k]);
    state = apply_controlled_unitary(state, cu.control, k, cu.on_present);
  }
  return state;
}

}  // namespace detail

/// Runs elements [begin, end) with probe couplings interleaved. `begin == 0`
/// includes the couplings scheduled at the source.
inline JointState evolve_range(const InterferometerSpec& spec, const ProbeSet& probes,
                               JointState state, std::size_t begin, std::size_t end) {
  const auto topo = analyze_topology(spec);
  const auto sched = schedule_probes(topo, probes);
  if (state.num_probes() != probes.size()) {
    throw std::invalid_argument("state carries " + std::to_string(state.num_probes()) +
                                " probe registers, probe set has " + std::to_string(probes.size()));
  }
  end = std::min(end, spec.elements.size());
  if (begin == 0) state = detail::apply_couplings(std::move(state), probes, sched, -1);
  for (std::size_t i = begin; i < end; ++i) {
    state = detail::apply_element(state, spec.elements[i], spec.inner_phase);
    state = detail::apply_couplings(std::move(state), probes, sched, static_cast<long>(i));
  }
  return state;
}

inline JointState initial_state(const InterferometerSpec& spec, const ProbeSet& probes) {
  std::vector<CVector> ready;
  for (const auto& p : probes) ready.push_back(ready_state(p));
  return JointState::product(spec.source, ready);
}

inline JointState forward_evolve(const InterferometerSpec& spec, const ProbeSet& probes,
                                 const JointState& initial) {
  for (const auto& [label, a] : initial) {
    if (label.path != spec.source) {
      throw std::invalid_argument("initial state must sit on the source path");
    }
  }
  return evolve_range(spec, probes, initial, 0, spec.elements.size());
}

inline JointState forward_evolve(const InterferometerSpec& spec, const ProbeSet& probes) {
  return forward_evolve(spec, probes, initial_state(spec, probes));
}

/// Probe-free forward state on the slice where `label` is live.
inline JointState forward_slice(const InterferometerSpec& spec, PathLabel label) {
  const auto topo = analyze_topology(spec);
  const long producer = topo.slot(label).producer;
  const ProbeSet none;
  return evolve_range(spec, none, JointState::basis(spec.source, {}), 0,
                      static_cast<std::size_t>(producer + 1));
}

/// ⟨target| U_rest |label⟩ where U_rest runs from the slice of `label` to the end.
inline Complex propagate_amplitude(const InterferometerSpec& spec, PathLabel label,
                                   PathLabel target) {
  const auto topo = analyze_topology(spec);
  const long producer = topo.slot(label).producer;
  const ProbeSet none;
  const auto out = evolve_range(spec, none, JointState::basis(label, {}),
                                static_cast<std::size_t>(producer + 1), spec.elements.size());
  return out.amplitude({target, {}});
}

/// Labels live on the slice right after the inner splitter produces B and C.
inline std::vector<PathLabel> mid_time_paths(const InterferometerSpec& spec) {
  const auto topo = analyze_topology(spec);
  const long t = topo.slot(PathLabel::B).producer;
  std::vector<PathLabel> out;
  for (const auto& [p, slot] : topo.slots) {
    if (slot.producer <= t && slot.consumer > t) out.push_back(p);
  }
  return out;
}

/// Probe-free state on the mid-time slice.
inline JointState mid_time_state(const InterferometerSpec& spec) {
  return forward_slice(spec, PathLabel::B);
}

/// Backward-propagated detector state on the mid-time slice:
/// Σ_X conj(⟨det|U_rest|X⟩) |X⟩, normalized.
inline JointState backward_state(const InterferometerSpec& spec, PathLabel detector) {
  if (!is_detector(detector)) throw std::invalid_argument("backward_state needs DET1 or DET2");
  JointState out(std::vector<std::size_t>{});
  for (PathLabel x : mid_time_paths(spec)) {
    const Complex a = propagate_amplitude(spec, x, detector);
    if (a != Complex{}) out.set({x, {}}, std::conj(a));
  }
  return out.normalized();
}

// ---------------------------------------------------------------------------
// Presets

/// Equal intensities in A, B, C; pre-selected (|A⟩+|B⟩+|C⟩)/√3 and
/// post-selected (DET1) (|A⟩−|B⟩+|C⟩)/√3 on the mid-time slice.
inline InterferometerSpec preset_griffiths_eq22() {
  const double r3 = 1.0 / std::sqrt(3.0);
  const double r23 = std::sqrt(2.0 / 3.0);
  const double h = std::numbers::sqrt2 / 2.0;
  InterferometerSpec s;
  s.name = "griffiths-eq22";
  s.elements = {
      BeamSplitter{{PathLabel::S}, {PathLabel::A, PathLabel::D}, splitter_matrix(r3, r23)},
      BeamSplitter{{PathLabel::D}, {PathLabel::B, PathLabel::C}, splitter_matrix(h, h)},
      PhaseShift{PathLabel::B, 0.0, true},
      BeamSplitter{{PathLabel::B, PathLabel::C}, {PathLabel::G, PathLabel::E}, splitter_matrix(h, h)},
      BeamSplitter{{PathLabel::A, PathLabel::E}, {PathLabel::F, PathLabel::DET2},
                   splitter_matrix(r3, -r23)},
      DetectorMap{PathLabel::F, PathLabel::DET1},
  };
  return s;
}

/// Same geometry with every splitter 50/50.
inline InterferometerSpec preset_balanced() {
  const double h = std::numbers::sqrt2 / 2.0;
  InterferometerSpec s = preset_griffiths_eq22();
  s.name = "balanced";
  std::get<BeamSplitter>(s.elements[0]).matrix = splitter_matrix(h, h);
  std::get<BeamSplitter>(s.elements[4]).matrix = splitter_matrix(h, h);
  return s;
}

inline std::vector<std::string> preset_names() { return {"griffiths-eq22", "balanced"}; }

inline InterferometerSpec preset_by_name(std::string_view name) {
  if (name == "griffiths-eq22") return preset_griffiths_eq22();
  if (name == "balanced") return preset_balanced();
  throw std::invalid_argument("unknown interferometer preset '" + std::string(name) + "'");
}

}  // namespace nmzi
