#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mhdlab/config.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/integrator.hpp"

namespace mhdlab {

struct RateTarget {
  std::string name;    // e.g. "u_inf"
  std::string column;  // raw CSV column
  double target;
  double lo;  // accepted exponent window
  double hi;
};

/// Exponent targets for ||u||inf, ||v||inf, ||psi||inf and ||P||inf.
const std::vector<RateTarget>& rate_targets();

struct RateFit {
  RateTarget target;
  std::optional<DecayFit> fit;
  std::string error;  // set when the fit was skipped
  bool power_law = false;  // r_squared >= 0.9
  bool in_window = false;
};

struct ExperimentReport {
  RunRecord record;
  std::vector<RateFit> fits;
  std::optional<DecayFit> u_l2_fit;  // informational

  bool rates_ok() const;
};

/// Time series of one raw component over the recorded reports.
std::vector<std::pair<double, double>> component_series(const RunRecord& rec,
                                                        const std::string& key);

std::vector<RateFit> fit_rates(const RunRecord& rec, double lo, double hi);

ExperimentReport run_experiment(const RunConfig& cfg);
void print_summary(std::ostream& os, const RunConfig& cfg, const ExperimentReport& rep);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepSpec {
  RunConfig base;
  std::vector<SweepAxis> axes;
  int parallelism = 1;
  std::size_t max_points = 256;
  std::filesystem::path output_dir = "sweep";
};

struct SweepPoint {
  std::size_t index = 0;
  std::vector<std::string> values;
  std::filesystem::path dir;
  bool ok = false;
  std::string error;
  std::vector<RateFit> fits;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  std::filesystem::path index_csv;
};

/// Lines "sweep.<config key> = v1, v2, ...", "sweep_parallelism = n",
/// "sweep_output = dir", "sweep_max_points = n", "base = file" (relative to
/// the spec) and any plain config key, which overrides the base.
SweepSpec parse_sweep_spec(std::string_view text, const std::filesystem::path& spec_dir = ".");
SweepSpec load_sweep_spec(const std::filesystem::path& path);

SweepReport sweep(const SweepSpec& spec);

}  // namespace mhdlab
