#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "mhdlab/harness.hpp"

namespace mhdlab {

const std::vector<RateTarget>& rate_targets() {
  static const std::vector<RateTarget> t = {
      {"u_inf", "y_u_linf", -1.0, -1.35, -0.70},
      {"v_inf", "y_v_linf", -1.5, -1.85, -1.15},
      {"psi_inf", "psi_linf", -0.5, -0.80, -0.25},
      {"p_inf", "p_linf", -0.5, -0.85, -0.25},
  };
  return t;
}

bool ExperimentReport::rates_ok() const {
  return !fits.empty() &&
         std::all_of(fits.begin(), fits.end(), [](const RateFit& f) { return f.in_window; });
}

std::vector<std::pair<double, double>> component_series(const RunRecord& rec,
                                                        const std::string& key) {
  std::vector<std::pair<double, double>> out;
  out.reserve(rec.reports.size());
  for (const auto& r : rec.reports) out.emplace_back(r.t, r.raw(key));
  return out;
}

std::vector<RateFit> fit_rates(const RunRecord& rec, double lo, double hi) {
  std::vector<RateFit> fits;
  for (const auto& target : rate_targets()) {
    RateFit f{target, std::nullopt, {}, false, false};
    const auto series = component_series(rec, target.column);
    try {
      f.fit = decay_fit(series, {lo, hi});
      f.power_law = f.fit->r_squared >= 0.9;
      f.in_window = f.power_law && f.fit->exponent >= target.lo && f.fit->exponent <= target.hi;
    } catch (const FitError& e) {
      f.error = e.what();
    }
    fits.push_back(std::move(f));
  }
  return fits;
}

ExperimentReport run_experiment(const RunConfig& cfg) {
  ExperimentReport rep;
  rep.record = run(cfg);
  rep.fits = fit_rates(rep.record, cfg.fit_lo, cfg.fit_hi);
  try {
    rep.u_l2_fit = decay_fit(component_series(rep.record, "y_u_l2"), {cfg.fit_lo, cfg.fit_hi});
  } catch (const FitError&) {
  }
  return rep;
}

void print_summary(std::ostream& os, const RunConfig& cfg, const ExperimentReport& rep) {
  const RunRecord& rec = rep.record;
  os << "stepper " << to_string(cfg.stepper) << ", grid " << cfg.nx << "x" << cfg.ny
     << ", steps " << rec.steps << "\n";
  if (rec.aborted) {
    os << "ABORTED: " << rec.abort_reason << " (last healthy t = " << rec.last_healthy_t << ")\n";
  }
  if (!rec.reports.empty()) {
    const NormReport& last = rec.reports.back();
    os << "final norms at t = " << last.t << ":\n";
    for (const auto& c : last.components) {
      os << "  " << std::left << std::setw(22) << c.key << std::right << std::setw(14)
         << std::scientific << std::setprecision(5) << c.raw << "  weighted " << c.weighted
         << "\n";
    }
    os << std::defaultfloat;
  }
  os << "max energy-step residual (relative) " << rec.max_step_residual
     << ", max relative divergence " << rec.max_divergence << "\n";
  os << "decay exponents over t in [" << cfg.fit_lo << ", " << cfg.fit_hi << "]:\n";
  for (const auto& f : rep.fits) {
    os << "  " << std::left << std::setw(8) << f.target.name << std::right;
    if (!f.fit) {
      os << " fit skipped (" << f.error << ")\n";
      continue;
    }
    os << " exponent " << std::fixed << std::setprecision(3) << f.fit->exponent << " +- "
       << f.fit->standard_error << "  R2 " << f.fit->r_squared << "  target " << f.target.target
       << " window [" << f.target.lo << ", " << f.target.hi << "] "
       << (f.in_window ? "ok" : "OUT") << (f.power_law ? "" : " (non-power-law, R2 low)")
       << std::defaultfloat << "\n";
  }
  if (rep.u_l2_fit) {
    os << "  u_l2     exponent " << std::fixed << std::setprecision(3) << rep.u_l2_fit->exponent
       << "  R2 " << rep.u_l2_fit->r_squared
       << (rep.u_l2_fit->r_squared < 0.9 ? " (non-power-law, R2 low)" : "") << std::defaultfloat
       << "\n";
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw ConfigError({{0, "", "cannot read " + p.string()}});
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text, const std::filesystem::path& spec_dir) {
  SweepSpec spec;
  std::vector<ConfigIssue> issues;
  std::vector<std::pair<int, std::pair<std::string, std::string>>> overrides;
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
    try {
      if (key == "base") {
        std::filesystem::path p = value;
        if (p.is_relative()) p = spec_dir / p;
        spec.base = load_config(p);
      } else if (key == "sweep_parallelism") {
        spec.parallelism = std::stoi(value);
        if (spec.parallelism < 1) issues.push_back({line_no, key, "must be positive"});
      } else if (key == "sweep_output") {
        spec.output_dir = value;
      } else if (key == "sweep_max_points") {
        spec.max_points = std::stoul(value);
      } else if (key.rfind("sweep.", 0) == 0) {
        SweepAxis axis{key.substr(6), split_list(value)};
        if (axis.values.empty()) issues.push_back({line_no, key, "axis has no values"});
        RunConfig probe;
        for (const auto& v : axis.values) set_config_value(probe, axis.key, v);
        spec.axes.push_back(std::move(axis));
      } else {
        overrides.push_back({line_no, {key, value}});
      }
    } catch (const ConfigError& e) {
      for (auto issue : e.issues()) {
        if (issue.line == 0) issue.line = line_no;
        issues.push_back(issue);
      }
    } catch (const std::exception& e) {
      issues.push_back({line_no, key, e.what()});
    }
  }
  for (const auto& [ln, kv] : overrides) {
    try {
      set_config_value(spec.base, kv.first, kv.second);
    } catch (const ConfigError& e) {
      for (auto issue : e.issues()) {
        issue.line = ln;
        issues.push_back(issue);
      }
    }
  }
  if (spec.axes.empty()) issues.push_back({0, "", "a sweep needs at least one 'sweep.<key>' axis"});
  std::size_t points = 1;
  for (const auto& a : spec.axes) points *= std::max<std::size_t>(1, a.values.size());
  if (points > spec.max_points) {
    issues.push_back({0, "", "sweep has " + std::to_string(points) + " points, cap is " +
                                 std::to_string(spec.max_points)});
  }
  if (issues.empty()) {
    try {
      validate(spec.base);
    } catch (const ConfigError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  return parse_sweep_spec(slurp(path), path.has_parent_path() ? path.parent_path() : ".");
}

SweepReport sweep(const SweepSpec& spec) {
  std::size_t total = 1;
  for (const auto& a : spec.axes) total *= a.values.size();

  SweepReport report;
  report.points.resize(total);
  std::filesystem::create_directories(spec.output_dir);
  for (std::size_t p = 0; p < total; ++p) {
    SweepPoint& pt = report.points[p];
    pt.index = p;
    std::size_t rest = p;
    pt.values.resize(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& vals = spec.axes[a].values;
      pt.values[a] = vals[rest % vals.size()];
      rest /= vals.size();
    }
    char name[32];
    std::snprintf(name, sizeof name, "point_%04zu", p);
    pt.dir = spec.output_dir / name;
  }

  auto run_point = [&](SweepPoint& pt) {
    try {
      RunConfig cfg = spec.base;
      for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        set_config_value(cfg, spec.axes[a].key, pt.values[a]);
      }
      cfg.csv = pt.dir / "series.csv";
      if (!cfg.snapshot_dir.empty()) cfg.snapshot_dir = pt.dir / "snapshots";
      std::filesystem::create_directories(pt.dir);
      std::ofstream(pt.dir / "config.txt") << echo_config(cfg);
      const ExperimentReport rep = run_experiment(cfg);
      std::ofstream summary(pt.dir / "summary.txt");
      print_summary(summary, cfg, rep);
      pt.fits = rep.fits;
      pt.ok = !rep.record.aborted;
      if (rep.record.aborted) pt.error = rep.record.abort_reason;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p; (p = next.fetch_add(1)) < total;) run_point(report.points[p]);
  };
  const int n_workers = std::max(1, std::min<int>(spec.parallelism, static_cast<int>(total)));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }

  report.index_csv = spec.output_dir / "index.csv";
  std::ofstream idx(report.index_csv, std::ios::binary);
  idx << "point";
  for (const auto& a : spec.axes) idx << ',' << a.key;
  idx << ",status";
  for (const auto& t : rate_targets()) idx << ",exp_" << t.name << ",r2_" << t.name;
  idx << ",error\n";
  for (const auto& pt : report.points) {
    idx << pt.dir.filename().string();
    for (const auto& v : pt.values) idx << ',' << v;
    idx << ',' << (pt.ok ? "ok" : "failed");
    for (std::size_t k = 0; k < rate_targets().size(); ++k) {
      if (k < pt.fits.size() && pt.fits[k].fit) {
        char buf[64];
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f", pt.fits[k].fit->exponent,
                      pt.fits[k].fit->r_squared);
        idx << buf;
      } else {
        idx << ",,";
      }
    }
    std::string err = pt.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    idx << ',' << err << '\n';
  }
  return report;
}

}  // namespace mhdlab
