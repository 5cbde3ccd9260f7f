#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mhdlab/field.hpp"

namespace mhdlab {

/// Solution multipliers of the damped wave (telegraph) equation
///   Phi_tt + Phi_t - Phi_xx = 0,
/// Phi(t) = K0(t) Phi0 + K1(t) (Phi0 / 2 + Phi1), acting on the x-frequency xi.
/// K0dot and K1dot are their time derivatives.
enum class KernelId { K0, K1, K0dot, K1dot };

std::string to_string(KernelId id);

/// Real value of the multiplier at (t, xi). Requires t >= 0.
///
/// With mu = 1/4 - xi^2:
///   K0 = exp(-t/2) C(mu t^2),  K1 = t exp(-t/2) S(mu t^2),
/// where C(z) = cosh(sqrt z), S(z) = sinh(sqrt z)/sqrt z continued to z < 0.
/// Near the double root (|mu| t^2 < 1e-6) a 4-term Taylor series is used.
double khat(KernelId kind, double t, double xi);

/// Multiply each coefficient at (kx, ky) by khat(kind, t, kx).
SpectralField apply_kernel(KernelId kind, double t, const SpectralField& f);

struct KernelSample {
  double t;
  double xi;
  KernelId kind;
  double value;
  double bound;
  bool pass;
  double ratio() const noexcept { return bound > 0.0 ? std::abs(value) / bound : (value == 0.0 ? 0.0 : INFINITY); }
};

struct KernelBoundReport {
  std::vector<KernelSample> samples;
  double max_ratio = 0.0;
  std::size_t failures() const noexcept;
};

/// Evaluate the constant-free kernel bounds at every (t, xi) pair:
///   |xi| <= 1/2:  0 <= K0 <= exp(-t xi^2),  0 <= K1 <= 2 exp(-t xi^2),
///                 |K0dot|, |K1dot| <= 2 xi^2 exp(-t xi^2) + exp(-t/2)
///   |xi| >= 1/2:  |K0| <= exp(-t/2),  |K1| <= t exp(-t/2)
/// A sample passes when |value| <= bound * (1 + 1e-12) (and the sign
/// condition holds where one is stated). Failures are recorded, not thrown.
KernelBoundReport check_kernel_bounds(std::span<const double> t_samples,
                                      std::span<const double> xi_samples);

}  // namespace mhdlab
