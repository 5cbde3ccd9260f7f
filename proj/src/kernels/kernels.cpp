#include "mhdlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhdlab {

namespace {

struct KernelPair {
  double k0;
  double k1;
};

constexpr double kSeriesThreshold = 1e-6;

KernelPair base_kernels(double t, double xi) {
  const double mu = 0.25 - xi * xi;
  const double z = mu * t * t;
  if (std::abs(z) < kSeriesThreshold) {
    // cosh(sqrt z) and sinh(sqrt z)/sqrt z about z = 0.
    const double c = 1.0 + z * (1.0 / 2.0 + z * (1.0 / 24.0 + z / 720.0));
    const double s = 1.0 + z * (1.0 / 6.0 + z * (1.0 / 120.0 + z / 5040.0));
    const double decay = std::exp(-0.5 * t);
    return {decay * c, t * decay * s};
  }
  if (mu > 0.0) {
    // Overdamped: real roots -1/2 +- s. Written with the small root in
    // cancellation-free form so large t neither overflows nor loses digits.
    const double s = std::sqrt(mu);
    const double slow = -xi * xi / (0.5 + s);
    const double fast = -0.5 - s;
    const double e_slow = std::exp(slow * t);
    return {0.5 * (e_slow + std::exp(fast * t)), e_slow * (-std::expm1(-2.0 * s * t)) / (2.0 * s)};
  }
  const double w = std::sqrt(-mu);
  const double decay = std::exp(-0.5 * t);
  return {decay * std::cos(w * t), decay * std::sin(w * t) / w};
}

}  // namespace

std::string to_string(KernelId id) {
  switch (id) {
    case KernelId::K0: return "K0";
    case KernelId::K1: return "K1";
    case KernelId::K0dot: return "K0dot";
    case KernelId::K1dot: return "K1dot";
  }
  return "?";
}

double khat(KernelId kind, double t, double xi) {
  if (!(t >= 0.0)) throw std::invalid_argument("khat: t must be >= 0");
  const KernelPair k = base_kernels(t, xi);
  switch (kind) {
    case KernelId::K0: return k.k0;
    case KernelId::K1: return k.k1;
    case KernelId::K0dot: return -0.5 * k.k0 + (0.25 - xi * xi) * k.k1;
    case KernelId::K1dot: return k.k0 - 0.5 * k.k1;
  }
  return 0.0;
}

SpectralField apply_kernel(KernelId kind, double t, const SpectralField& f) {
  if (!(t >= 0.0)) throw std::invalid_argument("apply_kernel: t must be >= 0");
  SpectralField out = f;
  const Grid2D& g = f.grid();
  const int nky = g.nky();
  auto coeffs = out.coeffs();
  for (int i = 0; i < g.nx(); ++i) {
    const double m = khat(kind, t, g.kx(i));
    Complex* row = coeffs.data() + static_cast<std::size_t>(i) * nky;
    for (int j = 0; j < nky; ++j) row[j] *= m;
  }
  return out;
}

std::size_t KernelBoundReport::failures() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const KernelSample& s) { return !s.pass; }));
}

KernelBoundReport check_kernel_bounds(std::span<const double> t_samples,
                                      std::span<const double> xi_samples) {
  constexpr double slack = 1.0 + 1e-12;
  KernelBoundReport report;

  auto record = [&](double t, double xi, KernelId kind, double bound, bool nonnegative) {
    const double value = khat(kind, t, xi);
    const bool sign_ok = !nonnegative || value >= 0.0;
    KernelSample s{t, xi, kind, value, bound, sign_ok && std::abs(value) <= bound * slack};
    if (std::isfinite(s.ratio())) report.max_ratio = std::max(report.max_ratio, s.ratio());
    else report.max_ratio = INFINITY;
    report.samples.push_back(s);
  };

  for (double t : t_samples) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("kernel bound check: bad t");
    for (double xi : xi_samples) {
      if (!std::isfinite(xi)) throw std::invalid_argument("kernel bound check: bad xi");
      const double a = std::abs(xi);
      if (a <= 0.5) {
        const double heat = std::exp(-t * xi * xi);
        const double dbound = 2.0 * xi * xi * heat + std::exp(-0.5 * t);
        record(t, xi, KernelId::K0, heat, true);
        record(t, xi, KernelId::K1, 2.0 * heat, true);
        record(t, xi, KernelId::K0dot, dbound, false);
        record(t, xi, KernelId::K1dot, dbound, false);
      }
      if (a >= 0.5) {
        const double decay = std::exp(-0.5 * t);
        record(t, xi, KernelId::K0, decay, false);
        record(t, xi, KernelId::K1, t * decay, false);
      }
    }
  }
  return report;
}

}  // namespace mhdlab
