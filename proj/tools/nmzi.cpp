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

// nmzi: command-line front end.
//
//   nmzi simulate --config run.toml [--engine oracle] [--out DIR]
//   nmzi counts   --config run.toml [--seed N] [--out DIR] [--format csv]
//   nmzi sweep    --config run.toml --sweep phase|epsilon [--grid 0:6.283:9]
//   nmzi verify   [--config run.toml] [--list]
//
// Exit status: 0 success, 1 a verification claim failed, 2 usage or
// configuration error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nmzi/nmzi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::string engine = "statevec";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> formats;
  std::string sweep;
  std::string grid;
  bool list = false;
};

nmzi::ConfigFile load(const Options& o) {
  nmzi::ConfigFile cfg = o.config.empty() ? nmzi::ConfigFile{} : nmzi::load_config(o.config);
  if (o.seed) cfg.campaign.seed = *o.seed;
  if (!o.out.empty()) cfg.output.directory = o.out;
  if (!o.formats.empty()) cfg.output.formats = o.formats;
  return cfg;
}

void emit(const std::string& text, const std::string& dir, const std::string& file) {
  if (dir.empty()) {
    std::cout << text;
    return;
  }
  nmzi::detail::write_file(std::filesystem::path(dir) / file, text);
  std::cerr << "wrote " << (std::filesystem::path(dir) / file).string() << "\n";
}

int run_simulate(const Options& o) {
  const auto cfg = load(o);
  const auto report = nmzi::cmd_simulate(cfg, nmzi::parse_engine(o.engine));
  emit(report.dump(2) + "\n", cfg.output.directory, "simulate.json");
  return kExitOk;
}

int run_counts(const Options& o) {
  const auto cfg = load(o);
  const auto res = nmzi::cmd_counts(cfg, nmzi::parse_engine(o.engine));
  std::cout << res.table;
  if (!cfg.output.directory.empty()) {
    for (const auto& p : nmzi::write_counts(res, cfg.output.directory, cfg.output.formats)) {
      std::cerr << "wrote " << p.string() << "\n";
    }
  }
  return kExitOk;
}

int run_sweep(const Options& o) {
  const auto cfg = load(o);
  const auto axis = nmzi::parse_sweep_axis(o.sweep);
  const auto res = nmzi::cmd_sweep(cfg, axis, nmzi::parse_grid(o.grid, axis), nmzi::parse_engine(o.engine));
  emit(res.csv, cfg.output.directory, axis == nmzi::SweepAxis::phase ? "sweep_phase.csv" : "sweep_epsilon.csv");
  for (const auto& [id, slope] : res.exponents) {
    std::cerr << "trace exponent " << id << ": " << slope << "\n";
  }
  return kExitOk;
}

int run_verify(const Options& o) {
  nmzi::acceptance::Context ctx;
  if (!o.config.empty()) {
    const auto cfg = load(o);
    ctx.spec = cfg.spec;
  }
  if (o.seed) ctx.seed = *o.seed;
  return nmzi::acceptance::cmd_verify(std::cout, ctx, o.list) == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested Mach-Zehnder interferometer with weak probes and post-selection"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "configuration file (TOML subset)");
    if (config_required) c->required();
    sub->add_option("--engine", o.engine, "statevec or oracle")
        ->check(CLI::IsMember({"statevec", "oracle"}));
    sub->add_option("--seed", o.seed, "campaign seed (overrides the config)");
  };

  auto* simulate = app.add_subcommand("simulate", "post-selected probe states as JSON");
  add_common(simulate, true);
  simulate->add_option("--out", o.out, "output directory (default: standard output)");

  auto* counts = app.add_subcommand("counts", "Monte Carlo click counts and coincidences");
  add_common(counts, true);
  counts->add_option("--out", o.out, "output directory for counts.csv / coincidences.json");
  counts->add_option("--format", o.formats, "csv and/or json")->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("sweep", "phase or coupling-strength sweep as CSV");
  add_common(sweep, true);
  sweep->add_option("--sweep", o.sweep, "phase or epsilon")->required();
  sweep->add_option("--grid", o.grid, "start:stop:count or a comma-separated list");
  sweep->add_option("--out", o.out, "output directory (default: standard output)");

  auto* verify = app.add_subcommand("verify", "run every acceptance claim");
  add_common(verify, false);
  verify->add_flag("--list", o.list, "print claim identifiers without running them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(o);
    if (*counts) return run_counts(o);
    if (*sweep) return run_sweep(o);
    return run_verify(o);
  } catch (const nmzi::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
