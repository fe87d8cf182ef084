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
 * Post-selection, conditional probe tomography, weak values, exact
 * click-pattern tables, trace-order fits and phase sweeps.
 */
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmzi/interferometer.hpp"
#include "nmzi/oracle.hpp"
#include "nmzi/probes.hpp"
#include "nmzi/statevec.hpp"

namespace nmzi {

enum class Engine { statevec, oracle };

inline std::string_view to_string(Engine e) { return e == Engine::statevec ? "statevec" : "oracle"; }

inline Engine parse_engine(std::string_view s) {
  if (s == "statevec") return Engine::statevec;
  if (s == "oracle") return Engine::oracle;
  throw std::invalid_argument("unknown engine '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Post-selection

struct Postselection {
  JointState conditional;
  double acceptance = 0.0;
};

inline Postselection postselect(const JointState& final_state, PathLabel detector) {
  if (!is_terminal(detector)) {
    throw std::invalid_argument("post-selection target must be DET1, DET2 or G");
  }
  JointState kept(final_state.probe_dims());
  for (const auto& [label, a] : final_state) {
    if (!is_terminal(label.path)) {
      throw std::invalid_argument("post-selection needs a final state; path " +
                                  std::string(to_string(label.path)) + " is still open");
    }
    if (label.path == detector) kept.set(label, a);
  }
  const double p = kept.norm2();
  if (!(p >= 1e-300)) {
    throw SimulationError("post-selection on " + std::string(to_string(detector)) +
                          " is an impossible branch (acceptance " + std::to_string(p) + ")");
  }
  return {kept.normalized(), p};
}

/// Conditional reduced state of probe k after post-selecting on `detector`.
inline DensityMatrix conditional_probe_state(const InterferometerSpec& spec, const ProbeSet& probes,
                                             std::size_t k, PathLabel detector = PathLabel::DET1,
                                             Engine engine = Engine::statevec) {
  if (engine == Engine::oracle) {
    return oracle::conditional_probe_state(oracle::enumerate_branches(spec, probes), k, detector);
  }
  const auto post = postselect(forward_evolve(spec, probes), detector);
  return partial_trace_probe(post.conditional, k);
}

/// Bures angle of a probe's conditional state relative to its ready state.
inline double trace_angle(const InterferometerSpec& spec, const ProbeSet& probes, std::size_t k,
                          PathLabel detector = PathLabel::DET1, Engine engine = Engine::statevec) {
  const auto rho = conditional_probe_state(spec, probes, k, detector, engine);
  return bures_angle(rho, DensityMatrix::pure(ready_state(probes[k])));
}

// ---------------------------------------------------------------------------
// Weak values

struct WeakValueReport {
  PathLabel detector = PathLabel::DET1;
  Complex overlap{};  // ⟨post|pre⟩
  std::map<PathLabel, Complex> values;

  [[nodiscard]] Complex at(PathLabel p) const {
    auto it = values.find(p);
    if (it == values.end()) throw std::out_of_range("no weak value for path " + std::string(to_string(p)));
    return it->second;
  }
};

/// ⟨post|Π_X|pre⟩ / ⟨post|pre⟩ for each non-terminal path X, each evaluated on
/// the slice where X is live (D between BS1 and BS2, E between BS3 and BS4).
inline WeakValueReport weak_values(const InterferometerSpec& spec,
                                   PathLabel detector = PathLabel::DET1) {
  const auto topo = analyze_topology(spec);
  WeakValueReport r;
  r.detector = detector;
  r.overlap = propagate_amplitude(spec, spec.source, detector);
  if (std::abs(r.overlap) < 1e-12) {
    throw SimulationError("weak values undefined: pre- and post-selected states are orthogonal");
  }
  for (const auto& [p, slot] : topo.slots) {
    if (is_terminal(p)) continue;
    const Complex fwd = forward_slice(spec, p).amplitude({p, {}});
    const Complex bwd = propagate_amplitude(spec, p, detector);
    r.values[p] = fwd * bwd / r.overlap;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pattern distributions

struct OutcomePattern {
  std::vector<std::uint32_t> outcomes;
  PathLabel detector = PathLabel::DET1;

  [[nodiscard]] std::size_t clicks() const {
    std::size_t n = 0;
    for (auto o : outcomes) n += (o != 0);
    return n;
  }
  auto operator<=>(const OutcomePattern&) const = default;
};

struct PatternDistribution {
  std::map<OutcomePattern, double> probabilities;
  /// Set when renormalized on a detector.
  std::optional<PathLabel> condition;
  /// Probability of the conditioning detector (1 when unconditioned).
  double acceptance = 1.0;

  [[nodiscard]] double total() const {
    double t = 0.0;
    for (const auto& [k, p] : probabilities) t += p;
    return t;
  }

  template <typename Pred>
  [[nodiscard]] double probability(Pred pred) const {
    double t = 0.0;
    for (const auto& [k, p] : probabilities) {
      if (pred(k)) t += p;
    }
    return t;
  }

  [[nodiscard]] double probability(const OutcomePattern& pat) const {
    auto it = probabilities.find(pat);
    return it == probabilities.end() ? 0.0 : it->second;
  }

  /// P(probe k reads `outcome`).
  [[nodiscard]] double marginal(std::size_t k, std::uint32_t outcome = 1) const {
    return probability([&](const OutcomePattern& pat) { return pat.outcomes.at(k) == outcome; });
  }
};

inline constexpr std::size_t kEnumerationBound = std::size_t{1} << 20;

inline PatternDistribution pattern_distribution(const InterferometerSpec& spec,
                                                const ProbeSet& probes,
                                                std::optional<PathLabel> condition = std::nullopt,
                                                Engine engine = Engine::statevec) {
  std::size_t space = 1;
  for (auto d : probes.dims()) {
    space *= d;
    if (space > kEnumerationBound) {
      throw std::length_error("outcome space exceeds 2^20 patterns; use the Monte Carlo sampler");
    }
  }
  PatternDistribution dist;
  if (engine == Engine::oracle) {
    for (const auto& [rec, p] : oracle::record_probabilities(oracle::enumerate_branches(spec, probes))) {
      if (p > 0.0) dist.probabilities[{rec.outcomes, rec.end}] += p;
    }
  } else {
    for (const auto& [label, a] : forward_evolve(spec, probes)) {
      dist.probabilities[{label.outcomes, label.path}] += std::norm(a);
    }
  }
  if (condition) {
    const double acc = dist.probability([&](const OutcomePattern& p) { return p.detector == *condition; });
    if (!(acc >= 1e-300)) {
      throw SimulationError("conditioning detector " + std::string(to_string(*condition)) +
                            " is never reached");
    }
    std::erase_if(dist.probabilities, [&](const auto& kv) { return kv.first.detector != *condition; });
    for (auto& [k, p] : dist.probabilities) p /= acc;
    dist.condition = condition;
    dist.acceptance = acc;
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Trace order

struct TraceOrderFit {
  PathLabel path = PathLabel::A;
  double exponent = 0.0;
  std::vector<double> epsilons;
  std::vector<double> angles;
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("bad log grid");
  std::vector<double> g(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Sweeps every qubit probe's ε over `grid` together and fits the exponent of
/// the Bures angle of the local probe on `path` against √ε.
inline TraceOrderFit trace_order(const InterferometerSpec& spec, const ProbeSet& probes,
                                 PathLabel path, Engine engine = Engine::statevec,
                                 std::vector<double> grid = log_grid(1e-6, 1e-2, 9)) {
  std::optional<std::size_t> k;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (probes[i].model == ProbeModel::qubit_local && probes[i].paths.front() == path) k = i;
  }
  if (!k) {
    throw std::invalid_argument("trace_order: no local qubit probe on path " +
                                std::string(to_string(path)));
  }
  TraceOrderFit fit;
  fit.path = path;
  std::vector<double> xs, ys;
  for (double eps : grid) {
    const double angle = trace_angle(spec, probes.with_epsilon(eps), *k, PathLabel::DET1, engine);
    fit.epsilons.push_back(eps);
    fit.angles.push_back(angle);
    if (angle > 1e-14) {
      xs.push_back(std::sqrt(eps));
      ys.push_back(angle);
    }
  }
  if (xs.size() < 2) {
    throw SimulationError("no trace at numerical precision on path " + std::string(to_string(path)));
  }
  fit.exponent = loglog_slope(xs, ys);
  return fit;
}

// ---------------------------------------------------------------------------
// Phase sweeps

/// What a phase sweep evaluates. `clicked` probes must read 1; with
/// `others_silent` every other probe must read 0, otherwise they are
/// marginalized. An empty `clicked` with `others_silent == false` is just
/// P(detector).
struct SweepQuantity {
  std::vector<std::size_t> clicked;
  bool others_silent = false;
  PathLabel detector = PathLabel::DET1;

  static SweepQuantity detector_probability(PathLabel det = PathLabel::DET1) { return {{}, false, det}; }
  static SweepQuantity coincidence(std::vector<std::size_t> probes, PathLabel det = PathLabel::DET1) {
    return {std::move(probes), false, det};
  }
  static SweepQuantity single_click(std::size_t probe, PathLabel det = PathLabel::DET1) {
    return {{probe}, true, det};
  }
};

/// Joint probability (not conditioned on the detector).
inline double evaluate(const PatternDistribution& joint, const SweepQuantity& q) {
  return joint.probability([&](const OutcomePattern& pat) {
    if (pat.detector != q.detector) return false;
    for (std::size_t k = 0; k < pat.outcomes.size(); ++k) {
      const bool want = std::find(q.clicked.begin(), q.clicked.end(), k) != q.clicked.end();
      if (want && pat.outcomes[k] == 0) return false;
      if (!want && q.others_silent && pat.outcomes[k] != 0) return false;
    }
    return true;
  });
}

struct PhasePoint {
  double phi = 0.0;
  double value = 0.0;
};

inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return g;
}

inline std::vector<PhasePoint> phase_sweep(const InterferometerSpec& spec, const ProbeSet& probes,
                                           const SweepQuantity& quantity,
                                           const std::vector<double>& grid,
                                           Engine engine = Engine::statevec) {
  for (auto k : quantity.clicked) {
    if (k >= probes.size()) throw std::out_of_range("sweep quantity names a missing probe");
  }
  std::vector<PhasePoint> out;
  for (double phi : grid) {
    const auto joint = pattern_distribution(spec.with_inner_phase(phi), probes, std::nullopt, engine);
    out.push_back({phi, evaluate(joint, quantity)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Silent-probe update

struct RouteWeight {
  std::string route;
  double prior = 0.0;
  double posterior = 0.0;
};

/// Route weights |amplitude|² among branches reaching `detector`, before and
/// after learning that probe k stayed silent. Numbers only; routes that
/// interfere do not have a classical meaning.
inline std::vector<RouteWeight> silent_probe_update(const InterferometerSpec& spec,
                                                    const ProbeSet& probes, std::size_t k,
                                                    PathLabel detector = PathLabel::DET1) {
  if (k >= probes.size()) throw std::out_of_range("probe index out of range");
  const auto branches = oracle::enumerate_branches(spec, probes);
  std::map<std::string, std::pair<double, double>> w;
  double prior_total = 0.0, post_total = 0.0;
  for (const auto& b : branches) {
    if (b.end() != detector) continue;
    const double p = std::norm(b.amplitude);
    auto& slot = w[b.route_string()];
    slot.first += p;
    prior_total += p;
    if (b.outcomes[k] == 0) {
      slot.second += p;
      post_total += p;
    }
  }
  std::vector<RouteWeight> out;
  for (const auto& [route, pw] : w) {
    out.push_back({route, pw.first / prior_total, post_total > 0 ? pw.second / post_total : 0.0});
  }
  return out;
}

}  // namespace nmzi
