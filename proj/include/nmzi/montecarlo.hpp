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
 * Counting campaigns: N runs drawn from the exact click-pattern distribution,
 * with per-probe click counts and the table of multi-click coincidences.
 *
 * Random stream contract: shard i of a campaign seeded with s uses
 * std::mt19937_64 seeded with splitmix64^(i+1)(s), i.e. the (i+1)-th output
 * of a SplitMix64 generator started at s. Uniforms are the top 53 bits of
 * the raw 64-bit output, so results do not depend on the standard library's
 * distribution implementations.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "nmzi/analysis.hpp"

namespace nmzi {

enum class CampaignMode { post_selected, full };

inline std::string_view to_string(CampaignMode m) {
  return m == CampaignMode::post_selected ? "post-selected" : "full";
}

inline CampaignMode parse_campaign_mode(std::string_view s) {
  if (s == "post-selected") return CampaignMode::post_selected;
  if (s == "full") return CampaignMode::full;
  throw std::invalid_argument("unknown campaign mode '" + std::string(s) + "'");
}

struct CampaignConfig {
  InterferometerSpec spec;
  ProbeSet probes;
  /// Post-selected mode: accepted particles. Full mode: emitted particles.
  std::uint64_t n_runs = 1;
  std::uint64_t seed = 0;
  PathLabel detector = PathLabel::DET1;
  CampaignMode mode = CampaignMode::post_selected;
  unsigned shards = 1;
  Engine engine = Engine::statevec;
};

inline constexpr std::string_view kGeneratorName = "mt19937_64/splitmix64-shards";

struct RunReport {
  std::vector<std::string> probe_ids;
  std::vector<std::uint64_t> clicks;
  /// Click patterns with two or more clicks among accepted runs.
  std::map<std::vector<std::uint32_t>, std::uint64_t> coincidences;
  std::uint64_t emitted = 0;
  std::uint64_t accepted = 0;
  std::uint64_t n_runs = 0;
  /// Exact P(detector) per emitted particle.
  double acceptance_probability = 0.0;
  std::uint64_t seed = 0;
  unsigned shards = 1;
  CampaignMode mode = CampaignMode::post_selected;
  PathLabel detector = PathLabel::DET1;
  std::string generator{kGeneratorName};

  bool operator==(const RunReport&) const = default;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_shard_seed(std::uint64_t seed, unsigned shard) {
  std::uint64_t state = seed;
  std::uint64_t out = 0;
  for (unsigned i = 0; i <= shard; ++i) out = splitmix64(state);
  return out;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace detail {

inline void require_qubits(const ProbeSet& probes) {
  if (!probes.all_qubits()) {
    throw std::invalid_argument("campaigns need qubit probes; pointer probes have no clicks");
  }
}

/// The distribution a campaign draws from: conditioned on the detector in
/// post-selected mode, the full joint distribution otherwise.
inline PatternDistribution campaign_distribution(const CampaignConfig& cfg) {
  require_qubits(cfg.probes);
  if (cfg.n_runs < 1) throw std::invalid_argument("n_runs must be at least 1");
  if (cfg.shards < 1) throw std::invalid_argument("shards must be at least 1");
  const auto cond = cfg.mode == CampaignMode::post_selected ? std::optional{cfg.detector}
                                                              : std::nullopt;
  return pattern_distribution(cfg.spec, cfg.probes, cond, cfg.engine);
}

inline std::vector<std::uint64_t> sample_histogram(const std::vector<double>& cdf,
                                                   std::uint64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> hist(cdf.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = uniform01(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++hist[static_cast<std::size_t>(std::distance(cdf.begin(), it))];
  }
  return hist;
}

}  // namespace detail

/// Sums counts; shard bookkeeping must agree on everything but the counts.
inline RunReport merge(RunReport a, const RunReport& b) {
  if (a.probe_ids != b.probe_ids) throw std::invalid_argument("cannot merge reports over different probes");
  for (std::size_t k = 0; k < a.clicks.size(); ++k) a.clicks[k] += b.clicks[k];
  for (const auto& [pat, n] : b.coincidences) a.coincidences[pat] += n;
  a.emitted += b.emitted;
  a.accepted += b.accepted;
  a.n_runs += b.n_runs;
  return a;
}

inline RunReport run_campaign(const CampaignConfig& cfg) {
  const auto dist = detail::campaign_distribution(cfg);
  std::vector<OutcomePattern> patterns;
  std::vector<double> cdf;
  double acc = 0.0;
  for (const auto& [pat, p] : dist.probabilities) {
    if (p <= 0.0) continue;
    acc += p;
    patterns.push_back(pat);
    cdf.push_back(acc);
  }

  RunReport base;
  for (const auto& p : cfg.probes) base.probe_ids.push_back(p.id);
  base.clicks.assign(cfg.probes.size(), 0);
  base.seed = cfg.seed;
  base.shards = cfg.shards;
  base.mode = cfg.mode;
  base.detector = cfg.detector;
  base.acceptance_probability =
      cfg.mode == CampaignMode::post_selected
          ? dist.acceptance
          : dist.probability([&](const OutcomePattern& p) { return p.detector == cfg.detector; });

  std::vector<std::vector<std::uint64_t>> hists(cfg.shards);
  std::vector<std::uint64_t> shard_runs(cfg.shards, cfg.n_runs / cfg.shards);
  for (unsigned i = 0; i < cfg.n_runs % cfg.shards; ++i) ++shard_runs[i];
  {
    std::vector<std::jthread> workers;
    for (unsigned i = 0; i < cfg.shards; ++i) {
      workers.emplace_back([&, i] {
        hists[i] = detail::sample_histogram(cdf, shard_runs[i], derive_shard_seed(cfg.seed, i));
      });
    }
  }

  RunReport total = base;
  for (unsigned i = 0; i < cfg.shards; ++i) {
    RunReport r = base;
    r.n_runs = shard_runs[i];
    for (std::size_t j = 0; j < patterns.size(); ++j) {
      const auto n = hists[i][j];
      if (n == 0) continue;
      r.emitted += n;
      if (patterns[j].detector != cfg.detector) continue;
      r.accepted += n;
      for (std::size_t k = 0; k < r.clicks.size(); ++k) {
        if (patterns[j].outcomes[k] != 0) r.clicks[k] += n;
      }
      if (patterns[j].clicks() >= 2) r.coincidences[patterns[j].outcomes] += n;
    }
    total = merge(std::move(total), r);
  }
  return total;
}

struct ProbeExpectation {
  std::string id;
  double expected = 0.0;
  double variance = 0.0;
};

/// Exact expectation and Bernoulli variance of each probe's click count.
inline std::vector<ProbeExpectation> expected_counts(const CampaignConfig& cfg) {
  const auto dist = detail::campaign_distribution(cfg);
  const auto n = static_cast<double>(cfg.n_runs);
  std::vector<ProbeExpectation> out;
  for (std::size_t k = 0; k < cfg.probes.size(); ++k) {
    const double p = dist.probability([&](const OutcomePattern& pat) {
      return pat.detector == cfg.detector && pat.outcomes[k] != 0;
    });
    out.push_back({cfg.probes[k].id, n * p, n * p * (1.0 - p)});
  }
  return out;
}

/// Expected number of accepted runs whose clicked set is exactly `pattern`.
inline double expected_pattern_count(const CampaignConfig& cfg,
                                     const std::vector<std::uint32_t>& pattern) {
  const auto dist = detail::campaign_distribution(cfg);
  return static_cast<double>(cfg.n_runs) * dist.probability(OutcomePattern{pattern, cfg.detector});
}

/// Expected number of accepted runs in which all of `probes` click (others free).
inline double expected_coincidence_count(const CampaignConfig& cfg,
                                         const std::vector<std::size_t>& probes) {
  const auto dist = detail::campaign_distribution(cfg);
  return static_cast<double>(cfg.n_runs) * evaluate(dist, SweepQuantity::coincidence(probes, cfg.detector));
}

}  // namespace nmzi
