#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include "mhdlab/integrator.hpp"
#include "mhdlab/snapshot.hpp"
#include "mhdlab/spectral.hpp"

namespace mhdlab {

std::vector<std::string> csv_columns() {
  std::vector<std::string> cols{"t"};
  for (const auto& k : norm_component_keys()) cols.push_back(k);
  for (const auto& k : norm_component_keys()) cols.push_back("raw_" + k);
  cols.emplace_back("E");
  cols.emplace_back("residual");
  return cols;
}

namespace {

// One fwrite + fflush per row, so a crash never leaves half a line behind.
class CsvStream {
 public:
  explicit CsvStream(const std::filesystem::path& path) {
    if (path.empty()) return;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file_.reset(std::fopen(path.c_str(), "wb"));
    if (!file_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    std::string header;
    for (const auto& c : csv_columns()) {
      if (!header.empty()) header += ',';
      header += c;
    }
    put(header + '\n');
  }

  void row(const NormReport& r, double e, double residual) {
    if (!file_) return;
    std::string line = num(r.t);
    for (const auto& c : r.components) line += ',' + num(c.weighted);
    for (const auto& c : r.components) line += ',' + num(c.raw);
    line += ',' + num(e);
    line += ',' + num(residual);
    put(line + '\n');
  }

 private:
  struct Closer {
    void operator()(std::FILE* f) const { std::fclose(f); }
  };

  static std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

  void put(const std::string& s) {
    if (std::fwrite(s.data(), 1, s.size(), file_.get()) != s.size() || std::fflush(file_.get())) {
      throw std::runtime_error("CSV write failed");
    }
  }

  std::unique_ptr<std::FILE, Closer> file_;
};

bool healthy(const SpectralField& f) {
  for (const Complex& c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    if (std::abs(c) > 1e100) return false;
  }
  return true;
}

std::size_t steps_per(double interval, double dt) {
  if (!(interval > 0.0)) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(interval / dt)));
}

// Uniform driver over the three steppers.
class Evolution {
 public:
  Evolution(const RunConfig& cfg, const State& initial)
      : stepper_(cfg.stepper), model_{cfg.nonlinear}, prim_(initial) {
    if (stepper_ == Stepper::duhamel) {
      second_.emplace(initial, initial_time_derivatives(initial, model_));
    } else if (stepper_ == Stepper::bform) {
      bstate_.emplace(to_bform(initial));
      psi_mean0_ = initial.psi.mean();
      v_mean0_ = initial.v.mean();
    }
  }

  // Returns the audit residual of the step (trapezoidal for Duhamel).
  double step(double dt, double t_new, double& scale) {
    StepAudit audit;
    switch (stepper_) {
      case Stepper::primitive:
        prim_ = step_primitive(prim_, dt, model_, &audit);
        prim_.t = t_new;
        break;
      case Stepper::bform: {
        *bstate_ = step_bform(*bstate_, dt, model_, &audit);
        bstate_->t = t_new;
        // The mean of v decays like exp(-(t-1)) and drives the mean of psi.
        const Complex psi_mean = psi_mean0_ - v_mean0_ * (1.0 - std::exp(-(t_new - 1.0)));
        prim_ = from_bform(*bstate_, psi_mean);
        break;
      }
      case Stepper::duhamel: {
        const double e0 = energy(prim_);
        const double u20 = velocity_energy(prim_.u, prim_.v);
        *second_ = step_duhamel(*second_, dt, model_);
        second_->t = t_new;
        prim_ = second_->primitive();
        audit.energy_before = e0;
        audit.energy_after = energy(prim_);
        audit.u2_mean = 0.5 * (u20 + velocity_energy(prim_.u, prim_.v));
        audit.residual = (audit.energy_after - audit.energy_before) / dt + 2.0 * audit.u2_mean;
        break;
      }
    }
    scale = audit.energy_after + audit.u2_mean;
    return audit.residual;
  }

  bool healthy_now() const {
    if (!healthy(prim_.u) || !healthy(prim_.v) || !healthy(prim_.psi)) return false;
    if (second_ && (!healthy(second_->ut) || !healthy(second_->vt) || !healthy(second_->psit)))
      return false;
    return true;
  }

  NormReport report(const NormOptions& opts) const {
    if (second_) return norm_report(*second_, opts);
    return norm_report(prim_, opts, model_);
  }

  const State& state() const { return prim_; }

 private:
  Stepper stepper_;
  Model model_;
  State prim_;
  std::optional<SecondOrderState> second_;
  std::optional<BState> bstate_;
  Complex psi_mean0_{}, v_mean0_{};
};

}  // namespace

RunRecord run(const RunConfig& cfg) {
  validate(cfg);
  const Grid2D grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);
  return run(cfg, make_initial_data(grid, cfg.ic_kind, cfg.amplitude, cfg.ic));
}

RunRecord run(const RunConfig& cfg, const State& initial) {
  validate(cfg);
  RunRecord rec;
  const NormOptions opts{cfg.N, cfg.eps};
  CsvStream csv(cfg.csv);
  if (!cfg.snapshot_dir.empty()) std::filesystem::create_directories(cfg.snapshot_dir);

  Evolution evo(cfg, initial);
  const std::size_t report_every = steps_per(cfg.cadence, cfg.dt);
  const std::size_t snap_every = steps_per(cfg.snapshot_cadence, cfg.dt);
  const double span = cfg.t_end - 1.0;
  const auto n_steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));

  auto record = [&](double residual) {
    const State& s = evo.state();
    NormReport r = evo.report(opts);
    const double e = energy(s);
    const double u2 = velocity_energy(s.u, s.v);
    rec.max_divergence = std::max(rec.max_divergence, relative_divergence(s.u, s.v));
    csv.row(r, e, residual);
    rec.reports.push_back(std::move(r));
    rec.energy.push_back({s.t, e, u2});
    rec.residuals.push_back(residual);
  };
  auto snapshot = [&](const std::string& name) {
    if (cfg.snapshot_dir.empty()) return;
    write_snapshot(cfg.snapshot_dir / name, evo.state());
  };

  record(0.0);
  double last_residual = 0.0;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double t_prev = evo.state().t;
    const double t_new = std::min(cfg.t_end, 1.0 + static_cast<double>(k) * cfg.dt);
    try {
      double scale = 0.0;
      last_residual = evo.step(t_new - t_prev, t_new, scale);
      if (scale > 0.0) {
        rec.max_step_residual = std::max(rec.max_step_residual, std::abs(last_residual) / scale);
      }
    } catch (const CflViolation& e) {
      rec.aborted = true;
      rec.abort_reason = e.what();
      rec.last_healthy_t = t_prev;
      break;
    }
    if (!evo.healthy_now()) {
      rec.aborted = true;
      rec.abort_reason = "non-finite or overflowing field at t = " + std::to_string(t_new);
      rec.last_healthy_t = t_prev;
      break;
    }
    rec.steps = k;
    rec.last_healthy_t = t_new;
    if (k % report_every == 0 || k == n_steps) record(last_residual);
    if (snap_every && k % snap_every == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "snap_%06zu.mhd", k);
      snapshot(name);
    }
  }
  if (!rec.aborted) {
    snapshot("final.mhd");
    rec.final_state = evo.state();
  }
  return rec;
}

}  // namespace mhdlab
