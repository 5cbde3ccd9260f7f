#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mhdlab/field.hpp"
#include "mhdlab/nonlinear.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

enum class NormKind { l2, linf };

/// ||<grad>^s f||_p. p = 2 via Parseval, p = inf as the max over the
/// collocation grid of the multiplied field.
double sobolev_norm(const SpectralField& f, double s, NormKind p);

/// Vector version: sqrt of summed squares for l2, max pointwise Euclidean
/// magnitude for linf.
double sobolev_norm(std::span<const SpectralField> fs, double s, NormKind p);

struct WeightedL1 {
  double value = 0.0;
  /// False when the boundary magnitude exceeds 1e-8 of the field maximum.
  bool localized = true;
};

/// Quadrature of <r>^w |f| with <r> = sqrt(1 + r^2), r measured from the box center.
WeightedL1 weighted_l1(const SpectralField& f, double w);

enum class NormGroup { X, Y, aux };

struct NormComponent {
  std::string key;
  NormGroup group;
  double power;  // weighted = raw * t^power
  double raw;
  double weighted;
};

struct NormOptions {
  int N = 5;
  double eps = 0.01;
};

struct NormReport {
  double t = 1.0;
  std::vector<NormComponent> components;

  const NormComponent& at(std::string_view key) const;
  double raw(std::string_view key) const { return at(key).raw; }
  double weighted(std::string_view key) const { return at(key).weighted; }
};

/// Keys of every NormReport component, in report order.
const std::vector<std::string>& norm_component_keys();

/// Time-weighted solution-norm components at state.t. Time derivatives come
/// from `rates` when given, otherwise from time_derivative_fields(state, model).
NormReport norm_report(const State& state, const NormOptions& opts, const Model& model = {});
NormReport norm_report(const State& state, const Rates& rates, const NormOptions& opts);
NormReport norm_report(const SecondOrderState& state, const NormOptions& opts);

/// P = -2 dy psi + div div(grad psi (x) grad psi + u (x) u) / (-Lap), zero mean.
SpectralField pressure_recover(const State& state);

/// [<grad>^sigma, u.grad] f = <grad>^sigma(u.grad f) - u.grad(<grad>^sigma f).
SpectralField commutator(const SpectralField& u, const SpectralField& v, const SpectralField& f,
                         double sigma);

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecayFit {
  double exponent = 0.0;
  double standard_error = 0.0;
  double intercept = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log(value) against log(t) over t in [lo, hi].
/// Throws FitError for fewer than 8 in-window samples or nonpositive values.
DecayFit decay_fit(std::span<const std::pair<double, double>> series,
                   std::pair<double, double> window);

/// E = ||u||^2 + ||grad psi||^2.
double energy(const State& s);
/// ||u||^2 + ||b - mean(b)||^2.
double energy(const BState& s);
double velocity_energy(const SpectralField& u, const SpectralField& v);

struct EnergySample {
  double t;
  double energy;
  double u2;
};

struct EnergyRow {
  double t;
  double energy;
  double u2;
  /// dE/dt + 2 ||u||^2 with dE/dt from fourth-order finite differences
  /// (central in the interior, one-sided at the two ends).
  double residual;
};

/// Energy identity audit over a uniformly spaced history.
/// Throws std::invalid_argument when the spacing is not uniform.
std::vector<EnergyRow> energy_report(std::span<const EnergySample> history);
std::vector<EnergyRow> energy_report(std::span<const State> history);

}  // namespace mhdlab
