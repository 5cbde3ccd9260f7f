#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mhdlab/state.hpp"

namespace mhdlab {

enum class Stepper { primitive, duhamel, bform };

std::string to_string(Stepper s);

struct RunConfig {
  int nx = 256;
  int ny = 256;
  double lx = 64.0 * std::numbers::pi;
  double ly = 64.0 * std::numbers::pi;

  InitialKind ic_kind = InitialKind::gaussian_vortex;
  double amplitude = 1e-3;
  InitialParams ic;

  double t_end = 10.0;
  double dt = 1e-2;
  Stepper stepper = Stepper::primitive;
  bool nonlinear = true;

  int N = 5;
  double eps = 0.01;
  double cadence = 0.1;  // time between recorded reports
  double fit_lo = 5.0;
  double fit_hi = 50.0;

  std::filesystem::path csv = "series.csv";  // empty: no CSV
  std::filesystem::path snapshot_dir;        // empty: no snapshots
  double snapshot_cadence = 0.0;             // 0: final snapshot only

  std::uint64_t seed = 0;
};

struct ConfigIssue {
  int line;  // 0 when the issue is not tied to a line
  std::string key;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Flat "dotted.key = value" lines, '#' starts a comment. Numbers may be
/// written with pi, e.g. "64*pi". Throws ConfigError listing every problem.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Validate a config built in code; same checks as parse_config.
void validate(const RunConfig& cfg);

/// Apply a single key = value assignment (used by sweeps). Throws ConfigError.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// The full config as a parseable document, defaults included.
std::string echo_config(const RunConfig& cfg);

const std::vector<std::string>& config_keys();

}  // namespace mhdlab
