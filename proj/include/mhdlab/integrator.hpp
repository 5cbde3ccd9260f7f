#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdlab/config.hpp"
#include "mhdlab/diagnostics.hpp"
#include "mhdlab/nonlinear.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

class CflViolation : public std::runtime_error {
 public:
  CflViolation(double dt, double dt_max);
  double dt_max() const noexcept { return dt_max_; }

 private:
  double dt_max_;
};

/// 0.5 / ((max|u| + max|b1|) kx_max + (max|v| + max|b2|) ky_max + 1) over the
/// retained band, with b the full magnetic field (background included).
double dt_max(const State& s);
double dt_max(const BState& s);

/// (u1, v1, psi1) at the initial time: the right-hand side of the primitive system.
Rates initial_time_derivatives(const State& s, const Model& model = {});

struct StepAudit {
  double energy_before = 0.0;
  double energy_after = 0.0;
  /// RK4-weighted average of ||u||^2 over the stages.
  double u2_mean = 0.0;
  /// (E_after - E_before)/dt + 2 u2_mean
  double residual = 0.0;
};

/// Classical RK4; each stage's velocity is Leray-projected. Throws CflViolation.
State step_primitive(const State& s, double dt, const Model& model = {},
                     StepAudit* audit = nullptr);

/// Exact damped-wave propagator plus trapezoidal Duhamel quadrature with one
/// corrector evaluation of the forcing at t + dt.
SecondOrderState step_duhamel(const SecondOrderState& s, double dt, const Model& model = {});

/// RK4 on the velocity / magnetic-field form, both re-projected each stage.
BState step_bform(const BState& s, double dt, const Model& model = {},
                  StepAudit* audit = nullptr);

/// Map back to stream form; psi is fixed up to its mean, taken from `mean_psi`.
State from_bform(const BState& b, Complex mean_psi = {});

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, double last_healthy_t);
  double last_healthy_t() const noexcept { return last_healthy_t_; }

 private:
  double last_healthy_t_;
};

struct RunRecord {
  std::vector<NormReport> reports;
  std::vector<EnergySample> energy;
  std::vector<double> residuals;  // per report, audit residual of the last step
  double max_step_residual = 0.0;  // max |residual| / (E + ||u||^2) over all steps
  double max_divergence = 0.0;     // relative divergence at recorded times
  std::size_t steps = 0;
  bool aborted = false;
  double last_healthy_t = 1.0;
  std::string abort_reason;
  std::optional<State> final_state;
};

/// Advance from t = 1 to cfg.t_end, recording reports every cfg.cadence.
/// Streams the CSV and writes snapshots as configured. NaN or overflow ends
/// the run early with aborted = true; artifacts written so far stay valid.
RunRecord run(const RunConfig& cfg);
/// As above from a given initial state.
RunRecord run(const RunConfig& cfg, const State& initial);

/// CSV header columns: t, weighted component keys, raw_<key>, E, residual.
std::vector<std::string> csv_columns();

}  // namespace mhdlab
