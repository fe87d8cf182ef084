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
 * Command implementations behind the `nmzi` tool. They return rendered
 * reports and write files, so the CLI front end stays a thin argument parser.
 *
 * Output schemas (schema_version 1):
 *   simulate.json     acceptance probability, weak values, per-probe
 *                     conditional density matrices and Bures angles
 *   counts.csv        probe,expected,observed,sigma
 *   coincidences.json config echo, seed, generator, clicks and the
 *                     multi-click coincidence table
 *   sweep.csv         one row per grid point
 */
#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nmzi/analysis.hpp"
#include "nmzi/config.hpp"
#include "nmzi/montecarlo.hpp"
#include "nmzi/pointer.hpp"

namespace nmzi {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::ordered_json;

namespace detail {

inline json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json paths_json(const std::vector<PathLabel>& ps) {
  json a = json::array();
  for (PathLabel p : ps) a.push_back(std::string(to_string(p)));
  return a;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

inline std::string csv_number(double d) { return format_double(d); }

}  // namespace detail

// ---------------------------------------------------------------------------
// simulate

inline json cmd_simulate(const ConfigFile& cfg, Engine engine = Engine::statevec) {
  const auto& spec = cfg.spec;
  const auto& probes = cfg.probes;
  const PathLabel det = cfg.campaign.detector;
  if (engine == Engine::oracle && !probes.all_qubits()) {
    throw std::invalid_argument("the oracle engine handles qubit probes only");
  }

  json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = "simulate";
  out["engine"] = std::string(to_string(engine));
  out["interferometer"] = {{"name", spec.name}, {"inner_phase", spec.inner_phase}};
  out["detector"] = std::string(to_string(det));

  std::optional<JointState> conditional;
  std::vector<oracle::Branch> branches;
  double acceptance = 0.0;
  if (engine == Engine::oracle) {
    branches = oracle::enumerate_branches(spec, probes);
    acceptance = oracle::oracle_probability(branches, [det](const oracle::Record& r) { return r.end == det; });
  } else {
    auto post = postselect(forward_evolve(spec, probes), det);
    acceptance = post.acceptance;
    conditional = std::move(post.conditional);
  }
  out["acceptance_probability"] = acceptance;

  json wv = json::object();
  try {
    for (const auto& [p, v] : weak_values(spec, det).values) wv[std::string(to_string(p))] = detail::complex_json(v);
  } catch (const SimulationError&) {
    wv = nullptr;
  }
  out["weak_values"] = wv;

  json tomo = json::array();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const auto& p = probes[k];
    json entry;
    entry["id"] = p.id;
    entry["model"] = std::string(to_string(p.model));
    entry["paths"] = detail::paths_json(p.coupled_paths());
    if (p.is_qubit()) {
      const auto rho = engine == Engine::oracle ? oracle::conditional_probe_state(branches, k, det)
                                                : partial_trace_probe(*conditional, k);
      entry["epsilon"] = p.epsilon;
      entry["density_matrix"] = detail::matrix_json(rho.matrix());
      entry["click_probability"] = rho(1, 1).real();
      if (rho.is_pure(1e-10)) {
        const CVector v = rho.dominant_vector();
        entry["amplitudes"] = json::array({detail::complex_json(v(0)), detail::complex_json(v(1))});
      } else {
        entry["amplitudes"] = nullptr;
      }
      entry["bures_angle"] = bures_angle(rho, DensityMatrix::pure(ready_state(p)));
    } else {
      const auto r = gaussian_pointer_state(*conditional, probes, k);
      entry["shift"] = p.pointer.shift;
      entry["width"] = p.pointer.width;
      entry["mean_shift"] = r.mean;
      entry["bures_angle"] = r.bures_angle;
      entry["warnings"] = r.warnings;
    }
    tomo.push_back(std::move(entry));
  }
  out["probes"] = std::move(tomo);
  return out;
}

// ---------------------------------------------------------------------------
// counts

struct CountsResult {
  RunReport report;
  std::vector<ProbeExpectation> expectations;
  std::string csv;
  std::string json_text;
  std::string table;
};

inline std::string pattern_name(const std::vector<std::string>& ids,
                                const std::vector<std::uint32_t>& pattern) {
  std::string s;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    if (pattern[k] == 0) continue;
    if (!s.empty()) s += "+";
    s += ids[k];
  }
  return s.empty() ? "none" : s;
}

inline CountsResult cmd_counts(const ConfigFile& cfg, Engine engine = Engine::statevec) {
  const auto campaign = cfg.campaign_config(engine);
  CountsResult res;
  res.report = run_campaign(campaign);
  res.expectations = expected_counts(campaign);
  const auto& rep = res.report;

  std::ostringstream csv;
  csv << "probe,expected,observed,sigma\n";
  for (std::size_t k = 0; k < rep.probe_ids.size(); ++k) {
    const auto& e = res.expectations[k];
    csv << e.id << ',' << detail::csv_number(e.expected) << ',' << rep.clicks[k] << ','
        << detail::csv_number(std::sqrt(e.variance)) << '\n';
  }
  res.csv = csv.str();

  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "counts";
  j["engine"] = std::string(to_string(engine));
  j["generator"] = rep.generator;
  j["seed"] = rep.seed;
  j["shards"] = rep.shards;
  j["mode"] = std::string(to_string(rep.mode));
  j["detector"] = std::string(to_string(rep.detector));
  j["n_runs"] = rep.n_runs;
  j["emitted"] = rep.emitted;
  j["accepted"] = rep.accepted;
  j["acceptance_probability"] = rep.acceptance_probability;
  json probes = json::array();
  for (std::size_t k = 0; k < rep.probe_ids.size(); ++k) {
    probes.push_back({{"id", rep.probe_ids[k]},
                      {"observed", rep.clicks[k]},
                      {"expected", res.expectations[k].expected},
                      {"sigma", std::sqrt(res.expectations[k].variance)}});
  }
  j["probes"] = std::move(probes);
  json coinc = json::array();
  for (const auto& [pat, n] : rep.coincidences) {
    coinc.push_back({{"pattern", pattern_name(rep.probe_ids, pat)},
                     {"observed", n},
                     {"expected", expected_pattern_count(campaign, pat)}});
  }
  j["coincidences"] = std::move(coinc);
  // exact expectations for every multi-click pattern with non-zero probability
  json expected_multi = json::array();
  {
    const auto cond = campaign.mode == CampaignMode::post_selected ? std::optional{campaign.detector}
                                                                   : std::nullopt;
    const auto dist = pattern_distribution(campaign.spec, campaign.probes, cond, engine);
    const double n = static_cast<double>(campaign.n_runs);
    for (const auto& [pat, p] : dist.probabilities) {
      if (pat.detector != campaign.detector || pat.clicks() < 2 || p <= 0.0) continue;
      expected_multi.push_back({{"pattern", pattern_name(rep.probe_ids, pat.outcomes)}, {"expected", n * p}});
    }
  }
  j["expected_coincidences"] = std::move(expected_multi);
  j["config"] = serialize_config(cfg);
  res.json_text = j.dump(2) + "\n";

  std::ostringstream tab;
  tab << "Triggered probe counts (" << rep.accepted << " runs accepted at "
      << to_string(rep.detector) << ", seed " << rep.seed << ")\n";
  tab << std::left << std::setw(10) << "probe" << std::right << std::setw(12) << "observed"
      << std::setw(14) << "expected" << std::setw(10) << "sigma" << '\n';
  for (std::size_t k = 0; k < rep.probe_ids.size(); ++k) {
    const auto& e = res.expectations[k];
    tab << std::left << std::setw(10) << e.id << std::right << std::setw(12) << rep.clicks[k]
        << std::setw(14) << std::fixed << std::setprecision(4) << e.expected << std::setw(10)
        << std::setprecision(2) << std::sqrt(e.variance) << '\n';
  }
  tab << "coincidences:";
  if (rep.coincidences.empty()) tab << " none";
  tab << '\n';
  for (const auto& [pat, n] : rep.coincidences) {
    tab << "  " << std::left << std::setw(20) << pattern_name(rep.probe_ids, pat) << n << '\n';
  }
  res.table = tab.str();
  return res;
}

/// Writes counts.csv / coincidences.json into `dir` for the requested formats.
inline std::vector<std::filesystem::path> write_counts(const CountsResult& res,
                                                       const std::filesystem::path& dir,
                                                       const std::vector<std::string>& formats) {
  std::vector<std::filesystem::path> written;
  for (const auto& f : formats) {
    if (f == "csv") {
      detail::write_file(dir / "counts.csv", res.csv);
      written.push_back(dir / "counts.csv");
    } else if (f == "json") {
      detail::write_file(dir / "coincidences.json", res.json_text);
      written.push_back(dir / "coincidences.json");
    } else {
      throw std::invalid_argument("unknown output format '" + f + "'");
    }
  }
  return written;
}

// ---------------------------------------------------------------------------
// sweep

enum class SweepAxis { phase, epsilon };

inline SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "phase") return SweepAxis::phase;
  if (s == "epsilon") return SweepAxis::epsilon;
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) + "' (use phase or epsilon)");
}

/// "start:stop:count" (linear for phase, logarithmic for epsilon) or an
/// explicit comma-separated list.
inline std::vector<double> parse_grid(std::string_view text, SweepAxis axis) {
  auto number = [](std::string_view t) {
    t = toml::detail::trim(t);
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), d);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
      throw std::invalid_argument("bad grid value '" + std::string(t) + "'");
    }
    return d;
  };
  if (text.empty()) {
    return axis == SweepAxis::phase ? linear_grid(0.0, 2.0 * std::numbers::pi, 9)
                                    : log_grid(1e-6, 1e-2, 9);
  }
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw std::invalid_argument("grid range must be start:stop:count");
    const double lo = number(text.substr(0, a));
    const double hi = number(text.substr(a + 1, b - a - 1));
    const double n = number(text.substr(b + 1));
    if (n < 2 || n != std::floor(n)) throw std::invalid_argument("grid count must be an integer >= 2");
    return axis == SweepAxis::phase ? linear_grid(lo, hi, static_cast<std::size_t>(n))
                                    : log_grid(lo, hi, static_cast<std::size_t>(n));
  }
  std::vector<double> g;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto c = text.find(',', start);
    if (c == std::string_view::npos) c = text.size();
    g.push_back(number(text.substr(start, c - start)));
    start = c + 1;
  }
  if (axis == SweepAxis::epsilon) {
    for (double e : g) {
      if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("epsilon grid values must lie in (0, 1]");
    }
  }
  return g;
}

struct SweepResult {
  std::string csv;
  /// Epsilon sweeps: fitted Bures-angle exponent per probe against √ε.
  std::vector<std::pair<std::string, double>> exponents;
};

inline SweepResult cmd_sweep(const ConfigFile& cfg, SweepAxis axis, const std::vector<double>& grid,
                             Engine engine = Engine::statevec) {
  const auto& probes = cfg.probes;
  const PathLabel det = cfg.campaign.detector;
  SweepResult res;
  std::ostringstream csv;
  if (axis == SweepAxis::phase) {
    if (!probes.all_qubits()) throw std::invalid_argument("phase sweeps need qubit probes");
    csv << "phi,p_" << to_string(det);
    for (const auto& p : probes) csv << ",single_" << p.id;
    for (std::size_t a = 0; a < probes.size(); ++a) {
      for (std::size_t b = a + 1; b < probes.size(); ++b) csv << ",pair_" << probes[a].id << '_' << probes[b].id;
    }
    csv << '\n';
    for (double phi : grid) {
      const auto joint = pattern_distribution(cfg.spec.with_inner_phase(phi), probes, std::nullopt, engine);
      csv << detail::csv_number(phi) << ','
          << detail::csv_number(evaluate(joint, SweepQuantity::detector_probability(det)));
      for (std::size_t k = 0; k < probes.size(); ++k) {
        csv << ',' << detail::csv_number(evaluate(joint, SweepQuantity::single_click(k, det)));
      }
      for (std::size_t a = 0; a < probes.size(); ++a) {
        for (std::size_t b = a + 1; b < probes.size(); ++b) {
          csv << ',' << detail::csv_number(evaluate(joint, SweepQuantity::coincidence({a, b}, det)));
        }
      }
      csv << '\n';
    }
  } else {
    std::vector<std::size_t> qubits;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      if (probes[k].is_qubit()) qubits.push_back(k);
    }
    if (qubits.empty()) throw std::invalid_argument("epsilon sweeps need at least one qubit probe");
    csv << "epsilon,sqrt_epsilon";
    for (auto k : qubits) csv << ",bures_" << probes[k].id;
    csv << '\n';
    std::vector<std::vector<double>> angles(qubits.size());
    for (double eps : grid) {
      const auto swept = probes.with_epsilon(eps);
      csv << detail::csv_number(eps) << ',' << detail::csv_number(std::sqrt(eps));
      for (std::size_t i = 0; i < qubits.size(); ++i) {
        const double a = trace_angle(cfg.spec, swept, qubits[i], det, engine);
        angles[i].push_back(a);
        csv << ',' << detail::csv_number(a);
      }
      csv << '\n';
    }
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      std::vector<double> xs, ys;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        if (angles[i][g] > 1e-14) {
          xs.push_back(std::sqrt(grid[g]));
          ys.push_back(angles[i][g]);
        }
      }
      const double slope = xs.size() >= 2 ? loglog_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
      res.exponents.emplace_back(probes[qubits[i]].id, slope);
    }
  }
  res.csv = csv.str();
  return res;
}

}  // namespace nmzi
