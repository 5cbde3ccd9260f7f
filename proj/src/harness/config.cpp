#include "mhdlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mhdlab {

std::string to_string(Stepper s) {
  switch (s) {
    case Stepper::primitive: return "primitive";
    case Stepper::duhamel: return "duhamel";
    case Stepper::bform: return "bform";
  }
  return "unknown";
}

namespace {

std::string format_issues(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid configuration:";
  for (const auto& i : issues) {
    out += "\n  ";
    if (i.line > 0) out += "line " + std::to_string(i.line) + ": ";
    if (!i.key.empty()) out += i.key + ": ";
    out += i.message;
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Product / quotient of numbers and "pi": "64*pi", "2pi", "pi/2", "1e-3".
double parse_number(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty value");
  double value = 1.0;
  char op = '*';
  std::size_t pos = 0;
  bool any = false;
  while (pos < s.size()) {
    while (pos < s.size() && s[pos] == ' ') ++pos;
    double factor;
    if (s.compare(pos, 2, "pi") == 0) {
      factor = std::numbers::pi;
      pos += 2;
    } else {
      const char* begin = s.data() + pos;
      const auto [end, ec] = std::from_chars(begin, s.data() + s.size(), factor);
      if (ec != std::errc() || end == begin) {
        throw std::invalid_argument("not a number: '" + s + "'");
      }
      pos += static_cast<std::size_t>(end - begin);
    }
    value = op == '*' ? value * factor : value / factor;
    any = true;
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos >= s.size()) break;
    if (s[pos] == '*' || s[pos] == '/') {
      op = s[pos++];
    } else if (s.compare(pos, 2, "pi") == 0) {
      op = '*';  // implicit product, "2pi"
    } else {
      throw std::invalid_argument("not a number: '" + s + "'");
    }
  }
  if (!any || !std::isfinite(value)) throw std::invalid_argument("not a number: '" + s + "'");
  return value;
}

long long parse_integer(std::string_view text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("not a boolean: '" + s + "'");
}

Stepper parse_stepper(std::string_view text) {
  const std::string s = trim(text);
  if (s == "primitive") return Stepper::primitive;
  if (s == "duhamel") return Stepper::duhamel;
  if (s == "bform") return Stepper::bform;
  throw std::invalid_argument("unknown stepper '" + s + "' (primitive, duhamel, bform)");
}

// Shortest text that parses back to the same double.
std::string num(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

struct KeySpec {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
KeySpec real_key(T RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.*member = parse_number(v); },
          [member](const RunConfig& c) { return num(c.*member); }};
}

KeySpec ic_real(double InitialParams::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.ic.*member = parse_number(v); },
          [member](const RunConfig& c) { return num(c.ic.*member); }};
}

KeySpec int_key(int RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) {
            const long long x = parse_integer(v);
            if (x < INT32_MIN || x > INT32_MAX) throw std::invalid_argument("out of range");
            c.*member = static_cast<int>(x);
          },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

KeySpec path_key(std::filesystem::path RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.*member = trim(v); },
          [member](const RunConfig& c) { return (c.*member).string(); }};
}

const std::map<std::string, KeySpec>& schema() {
  static const std::map<std::string, KeySpec> keys = {
      {"grid.nx", int_key(&RunConfig::nx)},
      {"grid.ny", int_key(&RunConfig::ny)},
      {"grid.lx", real_key(&RunConfig::lx)},
      {"grid.ly", real_key(&RunConfig::ly)},
      {"ic.kind",
       {[](RunConfig& c, std::string_view v) { c.ic_kind = parse_initial_kind(trim(v)); },
        [](const RunConfig& c) { return to_string(c.ic_kind); }}},
      {"ic.amplitude", real_key(&RunConfig::amplitude)},
      {"ic.sigma", ic_real(&InitialParams::sigma)},
      {"ic.center_x", ic_real(&InitialParams::center_x)},
      {"ic.center_y", ic_real(&InitialParams::center_y)},
      {"ic.shear_k", ic_real(&InitialParams::shear_k)},
      {"ic.mode_kx", ic_real(&InitialParams::mode_kx)},
      {"ic.mode_ky", ic_real(&InitialParams::mode_ky)},
      {"ic.file",
       {[](RunConfig& c, std::string_view v) { c.ic.file = trim(v); },
        [](const RunConfig& c) { return c.ic.file.string(); }}},
      {"time.t_end", real_key(&RunConfig::t_end)},
      {"time.dt", real_key(&RunConfig::dt)},
      {"time.stepper",
       {[](RunConfig& c, std::string_view v) { c.stepper = parse_stepper(v); },
        [](const RunConfig& c) { return to_string(c.stepper); }}},
      {"model.nonlinear",
       {[](RunConfig& c, std::string_view v) { c.nonlinear = parse_bool(v); },
        [](const RunConfig& c) { return std::string(c.nonlinear ? "true" : "false"); }}},
      {"diag.N", int_key(&RunConfig::N)},
      {"diag.eps", real_key(&RunConfig::eps)},
      {"diag.cadence", real_key(&RunConfig::cadence)},
      {"diag.fit_window",
       {[](RunConfig& c, std::string_view v) {
          const std::string s = trim(v);
          const auto colon = s.find(':');
          if (colon == std::string::npos) throw std::invalid_argument("expected lo:hi");
          c.fit_lo = parse_number(s.substr(0, colon));
          c.fit_hi = parse_number(s.substr(colon + 1));
        },
        [](const RunConfig& c) { return num(c.fit_lo) + ":" + num(c.fit_hi); }}},
      {"output.csv", path_key(&RunConfig::csv)},
      {"output.snapshot_dir", path_key(&RunConfig::snapshot_dir)},
      {"output.snapshot_cadence", real_key(&RunConfig::snapshot_cadence)},
      {"seed",
       {[](RunConfig& c, std::string_view v) {
          const long long x = parse_integer(v);
          if (x < 0) throw std::invalid_argument("seed must be non-negative");
          c.seed = static_cast<std::uint64_t>(x);
        },
        [](const RunConfig& c) { return std::to_string(c.seed); }}},
  };
  return keys;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

// Compare against both the full key and its last segment, so "vicosity"
// still finds something sensible.
std::string nearest_key(std::string_view key) {
  std::string best;
  std::size_t best_d = SIZE_MAX;
  for (const auto& [k, spec] : schema()) {
    const auto dot = k.rfind('.');
    const std::string_view leaf = dot == std::string::npos ? std::string_view(k)
                                                           : std::string_view(k).substr(dot + 1);
    const std::size_t d = std::min(edit_distance(key, k), edit_distance(key, leaf));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

void check(const RunConfig& c, std::vector<ConfigIssue>& out,
           const std::map<std::string, int>& lines) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    const auto it = lines.find(key);
    out.push_back({it == lines.end() ? 0 : it->second, key, msg});
  };
  for (const char* key : {"grid.nx", "grid.ny"}) {
    const int n = std::string_view(key) == "grid.nx" ? c.nx : c.ny;
    if (n < 4 || n % 2 != 0) fail(key, "must be an even integer >= 4");
  }
  if (!(c.lx > 0.0)) fail("grid.lx", "must be positive");
  if (!(c.ly > 0.0)) fail("grid.ly", "must be positive");
  if (!(c.amplitude >= 0.0)) fail("ic.amplitude", "must be non-negative");
  if (!(c.ic.sigma > 0.0)) fail("ic.sigma", "must be positive");
  if (c.ic_kind == InitialKind::file && c.ic.file.empty()) fail("ic.file", "required when ic.kind = file");
  if (!(c.t_end >= 1.0)) fail("time.t_end", "t_end must be ≥ 1");
  if (!(c.dt > 0.0)) fail("time.dt", "must be positive");
  if (c.N < 0) fail("diag.N", "must be non-negative");
  if (!(c.eps > 0.0)) fail("diag.eps", "must be positive");
  if (!(c.cadence > 0.0)) {
    fail("diag.cadence", "must be positive");
  } else if (c.dt > 0.0) {
    const double r = c.cadence / c.dt;
    if (r < 1.0 - 1e-9 || std::abs(r - std::round(r)) > 1e-6 * r) {
      fail("diag.cadence", "must be a positive multiple of time.dt");
    }
  }
  if (!(c.fit_lo < c.fit_hi)) fail("diag.fit_window", "needs lo < hi");
  if (!(c.snapshot_cadence >= 0.0)) fail("output.snapshot_cadence", "must be non-negative");
  for (const auto* p : {&c.csv, &c.snapshot_dir}) {
    if (p->empty()) continue;
    std::error_code ec;
    const auto parent = p->has_parent_path() ? p->parent_path() : std::filesystem::path(".");
    if (std::filesystem::exists(parent, ec) && !std::filesystem::is_directory(parent, ec)) {
      fail(p == &c.csv ? "output.csv" : "output.snapshot_dir", "parent is not a directory");
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(format_issues(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, spec] : schema()) k.push_back(name);
    return k;
  }();
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = schema().find(std::string(key));
  if (it == schema().end()) {
    throw ConfigError({{0, std::string(key),
                        "unknown key (did you mean '" + nearest_key(key) + "'?)"}});
  }
  try {
    it->second.set(cfg, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({{0, std::string(key), e.what()}});
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({line_no, "", "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = schema().find(key);
    if (it == schema().end()) {
      issues.push_back({line_no, key, "unknown key (did you mean '" + nearest_key(key) + "'?)"});
      continue;
    }
    if (seen.count(key)) {
      issues.push_back({line_no, key,
                        "duplicate key (first set on line " + std::to_string(seen[key]) + ")"});
      continue;
    }
    seen[key] = line_no;
    try {
      it->second.set(cfg, value);
    } catch (const std::invalid_argument& e) {
      issues.push_back({line_no, key, e.what()});
    }
  }
  check(cfg, issues, seen);
  std::stable_sort(issues.begin(), issues.end(), [](const ConfigIssue& a, const ConfigIssue& b) {
    return (a.line == 0 ? INT32_MAX : a.line) < (b.line == 0 ? INT32_MAX : b.line);
  });
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError({{0, "", "cannot read " + path.string()}});
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& cfg) {
  std::vector<ConfigIssue> issues;
  check(cfg, issues, {});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

std::string echo_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, spec] : schema()) out += key + " = " + spec.get(cfg) + "\n";
  return out;
}

}  // namespace mhdlab
