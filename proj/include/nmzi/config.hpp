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
 * Experiment configuration files.
 *
 * The format is the TOML subset below; every diagnostic carries the line it
 * refers to.
 *
 *     [interferometer]
 *     preset = "griffiths-eq22"      # or explicit [[element]] blocks
 *     inner_phase = 0.0
 *
 *     [[element]]
 *     kind = "beamsplitter"           # beamsplitter | phase | detector
 *     inputs = ["S"]
 *     outputs = ["A", "D"]
 *     matrix = [m00, m01, m10, m11]   # real parts, row-major
 *     matrix_imag = [0, 0, 0, 0]      # optional
 *
 *     [[probe]]
 *     id = "B"
 *     model = "qubit-local"           # qubit-local | qubit-nonlocal-w | pointer-gaussian
 *     path = "B"                      # local; pointers use paths = [...]
 *     arms = ["B", "C"]               # nonlocal w only
 *     epsilon = 1e-4
 *     shift = 0.02                    # pointers also take width, extent, bins
 *
 *     [campaign]
 *     n_runs = 10000000
 *     seed = 20170101
 *     mode = "post-selected"          # post-selected | full
 *     detector = "DET1"
 *     shards = 1
 *
 *     [output]
 *     directory = "out"
 *     formats = ["csv", "json"]
 *
 * Supported values: double-quoted strings, numbers, booleans, and
 * single-line arrays of those.
 */
#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "nmzi/interferometer.hpp"
#include "nmzi/montecarlo.hpp"
#include "nmzi/probes.hpp"

namespace nmzi {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "config:" + std::to_string(line) + ": " + msg
                                    : "config: " + msg),
        line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

namespace toml {

struct Value {
  enum class Kind { string, number, boolean, array } kind = Kind::string;
  std::string text;  // string contents or the number's literal
  bool boolean = false;
  std::vector<Value> items;
  int line = 0;
};

struct Table {
  std::map<std::string, Value> entries;
  int line = 0;
};

struct Document {
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> arrays;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool is_bare_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

class ValueParser {
 public:
  ValueParser(std::string_view s, int line) : s_(s), line_(line) {}

  Value parse_all() {
    Value v = parse();
    skip_ws();
    if (pos_ != s_.size() && s_[pos_] != '#') fail("unexpected text after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(line_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  Value parse() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    Value v;
    v.line = line_;
    const char c = s_[pos_];
    if (c == '"') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\') {
          if (++pos_ >= s_.size()) break;
          switch (s_[pos_]) {
            case 'n': v.text += '\n'; break;
            case 't': v.text += '\t'; break;
            case '"': v.text += '"'; break;
            case '\\': v.text += '\\'; break;
            default: fail("unsupported escape in string");
          }
        } else {
          v.text += s_[pos_];
        }
        ++pos_;
      }
      if (pos_ >= s_.size()) fail("unterminated string");
      ++pos_;
      v.kind = Value::Kind::string;
      return v;
    }
    if (c == '[') {
      ++pos_;
      v.kind = Value::Kind::array;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.items.push_back(parse());
        skip_ws();
        if (pos_ >= s_.size()) fail("unterminated array");
        if (s_[pos_] == ',') {
          ++pos_;
          skip_ws();
          if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return v;
          }
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        fail("expected ',' or ']' in array");
      }
    }
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' &&
           s_[pos_] != '\t' && s_[pos_] != '#' && s_[pos_] != '\r') {
      ++pos_;
    }
    const std::string tok(s_.substr(start, pos_ - start));
    if (tok == "true" || tok == "false") {
      v.kind = Value::Kind::boolean;
      v.boolean = tok == "true";
      return v;
    }
    std::string digits;
    for (char ch : tok) {
      if (ch != '_') digits += ch;
    }
    double d = 0.0;
    const char* first = digits.data();
    if (!digits.empty() && digits.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, digits.data() + digits.size(), d);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
      fail("cannot parse value '" + tok + "'");
    }
    v.kind = Value::Kind::number;
    v.text = digits;
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

/// Splits off a trailing comment that is not inside a string.
inline std::string_view strip_comment(std::string_view line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && in_str) {
      ++i;
      continue;
    }
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

}  // namespace detail

inline Document parse(std::string_view text) {
  Document doc;
  Table* current = &doc.tables[""];
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    ++lineno;
    const auto line = detail::trim(detail::strip_comment(text.substr(start, nl - start)));
    start = nl + 1;
    if (line.empty()) continue;
    if (line.starts_with("[[")) {
      if (!line.ends_with("]]")) throw ConfigError(lineno, "malformed array-of-tables header");
      const auto name = std::string(detail::trim(line.substr(2, line.size() - 4)));
      if (!detail::is_bare_key(name)) throw ConfigError(lineno, "bad table name '" + name + "'");
      if (doc.tables.contains(name)) {
        throw ConfigError(lineno, "'" + name + "' already defined as a table");
      }
      auto& arr = doc.arrays[name];
      arr.push_back(Table{{}, lineno});
      current = &arr.back();
      continue;
    }
    if (line.starts_with("[")) {
      if (!line.ends_with("]")) throw ConfigError(lineno, "malformed table header");
      const auto name = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (!detail::is_bare_key(name)) throw ConfigError(lineno, "bad table name '" + name + "'");
      if (doc.tables.contains(name) || doc.arrays.contains(name)) {
        throw ConfigError(lineno, "duplicate table [" + name + "]");
      }
      current = &doc.tables[name];
      current->line = lineno;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(lineno, "expected 'key = value'");
    const auto key = std::string(detail::trim(line.substr(0, eq)));
    if (!detail::is_bare_key(key)) throw ConfigError(lineno, "bad key '" + key + "'");
    if (current->entries.contains(key)) throw ConfigError(lineno, "duplicate key '" + key + "'");
    current->entries[key] = detail::ValueParser(line.substr(eq + 1), lineno).parse_all();
  }
  if (doc.tables[""].entries.empty()) doc.tables.erase("");
  return doc;
}

}  // namespace toml

// ---------------------------------------------------------------------------
// Typed access

namespace detail {

class TableReader {
 public:
  TableReader(const toml::Table& t, std::string name) : t_(t), name_(std::move(name)) {}

  [[nodiscard]] bool has(const std::string& key) const { return t_.entries.contains(key); }

  [[nodiscard]] const toml::Value& get(const std::string& key) const {
    auto it = t_.entries.find(key);
    if (it == t_.entries.end()) throw ConfigError(t_.line, name_ + ": missing key '" + key + "'");
    used_.push_back(key);
    return it->second;
  }

  [[nodiscard]] std::string str(const std::string& key) const {
    const auto& v = get(key);
    if (v.kind != toml::Value::Kind::string) throw ConfigError(v.line, "'" + key + "' must be a string");
    return v.text;
  }
  [[nodiscard]] std::string str(const std::string& key, std::string def) const {
    return has(key) ? str(key) : std::move(def);
  }

  [[nodiscard]] static double as_number(const toml::Value& v, const std::string& key) {
    if (v.kind != toml::Value::Kind::number) throw ConfigError(v.line, "'" + key + "' must be a number");
    double d = 0.0;
    std::from_chars(v.text.data(), v.text.data() + v.text.size(), d);
    return d;
  }
  [[nodiscard]] double num(const std::string& key) const { return as_number(get(key), key); }
  [[nodiscard]] double num(const std::string& key, double def) const {
    return has(key) ? num(key) : def;
  }

  [[nodiscard]] std::uint64_t uint(const std::string& key) const {
    const auto& v = get(key);
    std::uint64_t u = 0;
    const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), u);
    if (v.kind != toml::Value::Kind::number || ec != std::errc{} ||
        ptr != v.text.data() + v.text.size()) {
      throw ConfigError(v.line, "'" + key + "' must be a non-negative integer");
    }
    return u;
  }
  [[nodiscard]] std::uint64_t uint(const std::string& key, std::uint64_t def) const {
    return has(key) ? uint(key) : def;
  }

  [[nodiscard]] bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const auto& v = get(key);
    if (v.kind != toml::Value::Kind::boolean) throw ConfigError(v.line, "'" + key + "' must be true or false");
    return v.boolean;
  }

  [[nodiscard]] std::vector<std::string> str_list(const std::string& key) const {
    const auto& v = get(key);
    if (v.kind != toml::Value::Kind::array) throw ConfigError(v.line, "'" + key + "' must be an array");
    std::vector<std::string> out;
    for (const auto& it : v.items) {
      if (it.kind != toml::Value::Kind::string) throw ConfigError(v.line, "'" + key + "' must hold strings");
      out.push_back(it.text);
    }
    return out;
  }

  [[nodiscard]] std::vector<double> num_list(const std::string& key) const {
    const auto& v = get(key);
    if (v.kind != toml::Value::Kind::array) throw ConfigError(v.line, "'" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& it : v.items) out.push_back(as_number(it, key));
    return out;
  }

  [[nodiscard]] PathLabel path(const std::string& key) const {
    const auto s = str(key);
    return wrap(key, [&] { return parse_path(s); });
  }

  [[nodiscard]] std::vector<PathLabel> paths(const std::string& key) const {
    std::vector<PathLabel> out;
    for (const auto& s : str_list(key)) out.push_back(wrap(key, [&] { return parse_path(s); }));
    return out;
  }

  /// Runs `f`, re-anchoring std::invalid_argument at the key's line.
  template <typename F>
  std::invoke_result_t<F> wrap(const std::string& key, F&& f) const {
    try {
      return f();
    } catch (const std::invalid_argument& e) {
      const int line = has(key) ? t_.entries.at(key).line : t_.line;
      throw ConfigError(line, e.what());
    }
  }

  /// Rejects keys nobody asked for.
  void finish() const {
    for (const auto& [k, v] : t_.entries) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw ConfigError(v.line, name_ + ": unknown key '" + k + "'");
      }
    }
  }

  [[nodiscard]] int line() const { return t_.line; }

 private:
  const toml::Table& t_;
  std::string name_;
  mutable std::vector<std::string> used_;
};

}  // namespace detail

struct OutputSettings {
  std::string directory;
  std::vector<std::string> formats{"csv", "json"};

  bool operator==(const OutputSettings&) const = default;
};

struct CampaignSettings {
  std::uint64_t n_runs = 10'000'000;
  std::uint64_t seed = 0;
  CampaignMode mode = CampaignMode::post_selected;
  PathLabel detector = PathLabel::DET1;
  unsigned shards = 1;

  bool operator==(const CampaignSettings&) const = default;
};

struct ConfigFile {
  InterferometerSpec spec = preset_griffiths_eq22();
  ProbeSet probes;
  CampaignSettings campaign;
  OutputSettings output;

  [[nodiscard]] CampaignConfig campaign_config(Engine engine = Engine::statevec) const {
    return {spec, probes, campaign.n_runs, campaign.seed, campaign.detector, campaign.mode,
            campaign.shards, engine};
  }

  bool operator==(const ConfigFile&) const = default;
};

namespace detail {

inline Element parse_element(const toml::Table& t) {
  TableReader r(t, "[[element]]");
  const auto kind = r.str("kind");
  Element e;
  if (kind == "beamsplitter") {
    BeamSplitter bs;
    bs.inputs = r.paths("inputs");
    const auto outs = r.paths("outputs");
    if (outs.size() != 2) throw ConfigError(r.get("outputs").line, "beamsplitter needs two outputs");
    bs.outputs = {outs[0], outs[1]};
    const auto re = r.num_list("matrix");
    std::vector<double> im(4, 0.0);
    if (r.has("matrix_imag")) im = r.num_list("matrix_imag");
    if (re.size() != 4 || im.size() != 4) {
      throw ConfigError(r.get("matrix").line, "beamsplitter matrix needs 4 entries (row-major)");
    }
    for (int i = 0; i < 4; ++i) bs.matrix(i / 2, i % 2) = Complex{re[i], im[i]};
    e = bs;
  } else if (kind == "phase") {
    e = PhaseShift{r.path("path"), r.num("phase", 0.0), r.boolean("tunable", false)};
  } else if (kind == "detector") {
    e = DetectorMap{r.path("port"), r.path("detector")};
  } else {
    throw ConfigError(r.get("kind").line, "unknown element kind '" + kind + "'");
  }
  r.finish();
  return e;
}

inline ProbeConfig parse_probe(const toml::Table& t) {
  TableReader r(t, "[[probe]]");
  ProbeConfig p;
  p.id = r.str("id");
  p.model = r.wrap("model", [&] { return parse_probe_model(r.str("model")); });
  switch (p.model) {
    case ProbeModel::qubit_local:
      p.paths = {r.path("path")};
      p.epsilon = r.num("epsilon");
      break;
    case ProbeModel::qubit_nonlocal_w: {
      p.epsilon = r.num("epsilon");
      const auto arms = r.has("arms") ? r.paths("arms") : std::vector{PathLabel::B, PathLabel::C};
      p.arm_b = std::find(arms.begin(), arms.end(), PathLabel::B) != arms.end();
      p.arm_c = std::find(arms.begin(), arms.end(), PathLabel::C) != arms.end();
      for (PathLabel a : arms) {
        if (a != PathLabel::B && a != PathLabel::C) {
          throw ConfigError(r.get("arms").line, "nonlocal w arms must be B and/or C");
        }
      }
      break;
    }
    case ProbeModel::pointer_gaussian:
      p.paths = r.has("paths") ? r.paths("paths") : std::vector{r.path("path")};
      p.pointer.shift = r.num("shift");
      p.pointer.width = r.num("width", 1.0);
      p.pointer.extent = r.num("extent", 8.0);
      p.pointer.bins = static_cast<std::size_t>(r.uint("bins", 257));
      break;
  }
  r.finish();
  r.wrap("model", [&] {
    validate(p);
    return 0;
  });
  return p;
}

}  // namespace detail

inline ConfigFile parse_config(std::string_view text) {
  const auto doc = toml::parse(text);
  ConfigFile cfg;
  for (const auto& [name, table] : doc.tables) {
    if (name != "interferometer" && name != "campaign" && name != "output") {
      throw ConfigError(table.line, "unknown section [" + name + "]");
    }
  }
  for (const auto& [name, arr] : doc.arrays) {
    if (name != "probe" && name != "element") {
      throw ConfigError(arr.front().line, "unknown section [[" + name + "]]");
    }
  }

  const bool explicit_elements = doc.arrays.contains("element");
  if (explicit_elements) cfg.spec.name = "custom";
  if (auto it = doc.tables.find("interferometer"); it != doc.tables.end()) {
    detail::TableReader r(it->second, "[interferometer]");
    if (r.has("preset") && explicit_elements) {
      throw ConfigError(r.get("preset").line, "give either a preset or [[element]] blocks, not both");
    }
    if (r.has("preset")) {
      const auto name = r.str("preset");
      cfg.spec = r.wrap("preset", [&] { return preset_by_name(name); });
    } else {
      cfg.spec.name = r.str("name", cfg.spec.name);
    }
    if (r.has("source")) cfg.spec.source = r.path("source");
    cfg.spec.inner_phase = r.num("inner_phase", 0.0);
    r.finish();
  }
  if (explicit_elements) {
    cfg.spec.elements.clear();
    for (const auto& t : doc.arrays.at("element")) cfg.spec.elements.push_back(detail::parse_element(t));
  }
  try {
    validate(cfg.spec);
  } catch (const std::invalid_argument& e) {
    const int line = explicit_elements ? doc.arrays.at("element").front().line : 0;
    throw ConfigError(line, e.what());
  }

  if (auto it = doc.arrays.find("probe"); it != doc.arrays.end()) {
    for (const auto& t : it->second) {
      auto p = detail::parse_probe(t);
      try {
        cfg.probes.add(p);
        (void)schedule_probes(analyze_topology(cfg.spec), cfg.probes);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(t.line, e.what());
      }
    }
  }

  if (auto it = doc.tables.find("campaign"); it != doc.tables.end()) {
    detail::TableReader r(it->second, "[campaign]");
    cfg.campaign.n_runs = r.uint("n_runs", cfg.campaign.n_runs);
    if (cfg.campaign.n_runs < 1) throw ConfigError(r.get("n_runs").line, "n_runs must be at least 1");
    cfg.campaign.seed = r.uint("seed", 0);
    if (r.has("mode")) {
      const auto m = r.str("mode");
      cfg.campaign.mode = r.wrap("mode", [&] { return parse_campaign_mode(m); });
    }
    if (r.has("detector")) {
      cfg.campaign.detector = r.path("detector");
      if (!is_detector(cfg.campaign.detector)) {
        throw ConfigError(r.get("detector").line, "campaign detector must be DET1 or DET2");
      }
    }
    cfg.campaign.shards = static_cast<unsigned>(r.uint("shards", 1));
    if (cfg.campaign.shards < 1 || cfg.campaign.shards > 1024) {
      throw ConfigError(r.get("shards").line, "shards must lie in [1, 1024]");
    }
    r.finish();
  }

  if (auto it = doc.tables.find("output"); it != doc.tables.end()) {
    detail::TableReader r(it->second, "[output]");
    cfg.output.directory = r.str("directory", "");
    if (r.has("formats")) {
      cfg.output.formats = r.str_list("formats");
      for (const auto& f : cfg.output.formats) {
        if (f != "csv" && f != "json") throw ConfigError(r.get("formats").line, "unknown format '" + f + "'");
      }
    }
    r.finish();
  }
  return cfg;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Writing

namespace detail {

/// Shortest text that reads back to the same double.
inline std::string format_double(double d) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline std::string path_list(std::span<const PathLabel> ps) {
  std::string s = "[";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ", ";
    s += quoted(to_string(ps[i]));
  }
  return s + "]";
}

}  // namespace detail

/// Writes the interferometer as explicit elements, so any programmatically
/// built spec survives a round trip.
inline std::string serialize_spec(const InterferometerSpec& spec) {
  using detail::format_double;
  using detail::quoted;
  std::ostringstream os;
  os << "[interferometer]\n"
     << "name = " << quoted(spec.name) << "\n"
     << "source = " << quoted(to_string(spec.source)) << "\n"
     << "inner_phase = " << format_double(spec.inner_phase) << "\n";
  for (const auto& e : spec.elements) {
    os << "\n[[element]]\n";
    if (const auto* bs = std::get_if<BeamSplitter>(&e)) {
      os << "kind = \"beamsplitter\"\n"
         << "inputs = " << detail::path_list(bs->inputs) << "\n"
         << "outputs = " << detail::path_list(bs->outputs) << "\n";
      bool complex_entries = false;
      std::string re = "[", im = "[";
      for (int i = 0; i < 4; ++i) {
        const Complex c = bs->matrix(i / 2, i % 2);
        if (i) {
          re += ", ";
          im += ", ";
        }
        re += format_double(c.real());
        im += format_double(c.imag());
        complex_entries |= c.imag() != 0.0;
      }
      os << "matrix = " << re << "]\n";
      if (complex_entries) os << "matrix_imag = " << im << "]\n";
    } else if (const auto* ph = std::get_if<PhaseShift>(&e)) {
      os << "kind = \"phase\"\n"
         << "path = " << quoted(to_string(ph->path)) << "\n"
         << "phase = " << format_double(ph->phase) << "\n"
         << "tunable = " << (ph->tunable ? "true" : "false") << "\n";
    } else {
      const auto& dm = std::get<DetectorMap>(e);
      os << "kind = \"detector\"\n"
         << "port = " << quoted(to_string(dm.port)) << "\n"
         << "detector = " << quoted(to_string(dm.detector)) << "\n";
    }
  }
  return os.str();
}

inline std::string serialize_probes(const ProbeSet& probes) {
  using detail::format_double;
  using detail::quoted;
  std::ostringstream os;
  for (const auto& p : probes) {
    os << "\n[[probe]]\n"
       << "id = " << quoted(p.id) << "\n"
       << "model = " << quoted(to_string(p.model)) << "\n";
    switch (p.model) {
      case ProbeModel::qubit_local:
        os << "path = " << quoted(to_string(p.paths.front())) << "\n"
           << "epsilon = " << format_double(p.epsilon) << "\n";
        break;
      case ProbeModel::qubit_nonlocal_w:
        os << "arms = " << detail::path_list(p.coupled_paths()) << "\n"
           << "epsilon = " << format_double(p.epsilon) << "\n";
        break;
      case ProbeModel::pointer_gaussian:
        os << "paths = " << detail::path_list(p.paths) << "\n"
           << "shift = " << format_double(p.pointer.shift) << "\n"
           << "width = " << format_double(p.pointer.width) << "\n"
           << "extent = " << format_double(p.pointer.extent) << "\n"
           << "bins = " << p.pointer.bins << "\n";
        break;
    }
  }
  return os.str();
}

inline std::string serialize_config(const ConfigFile& cfg) {
  std::ostringstream os;
  os << serialize_spec(cfg.spec) << serialize_probes(cfg.probes) << "\n[campaign]\n"
     << "n_runs = " << cfg.campaign.n_runs << "\n"
     << "seed = " << cfg.campaign.seed << "\n"
     << "mode = " << detail::quoted(to_string(cfg.campaign.mode)) << "\n"
     << "detector = " << detail::quoted(to_string(cfg.campaign.detector)) << "\n"
     << "shards = " << cfg.campaign.shards << "\n"
     << "\n[output]\n"
     << "directory = " << detail::quoted(cfg.output.directory) << "\n"
     << "formats = [";
  for (std::size_t i = 0; i < cfg.output.formats.size(); ++i) {
    if (i) os << ", ";
    os << detail::quoted(cfg.output.formats[i]);
  }
  os << "]\n";
  return os.str();
}

}  // namespace nmzi
