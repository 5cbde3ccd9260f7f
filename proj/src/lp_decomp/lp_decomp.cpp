#include "mhdlab/lp_decomp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mhdlab/spectral.hpp"

namespace mhdlab {

namespace {

double smooth_step_seed(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double modulus_of(Modulus m, double kx, double ky) {
  return m == Modulus::full ? std::hypot(kx, ky) : std::abs(kx);
}

double factor_symbol(const RieszFactor& f, double kx, double ky) {
  const double k2 = kx * kx + ky * ky;
  if (k2 == 0.0) return 0.0;
  const double ka = f.a == Axis::x ? kx : ky;
  const double kb = f.b == Axis::x ? kx : ky;
  return f.sign * ka * kb / k2;
}

}  // namespace

double bump(double r) {
  const double a = std::abs(r);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = smooth_step_seed(2.0 - a);
  return up / (up + smooth_step_seed(a - 1.0));
}

SpectralField project(const SpectralField& f, double M, ProjectMode mode, Modulus modulus) {
  if (!(M > 0.0)) throw std::invalid_argument("project: M must be positive");
  SpectralField out = f;
  out.apply([=](double kx, double ky) {
    const double k = modulus_of(modulus, kx, ky);
    switch (mode) {
      case ProjectMode::leq: return bump(k / M);
      case ProjectMode::gt: return 1.0 - bump(k / M);
      case ProjectMode::band: return bump(k / M) - bump(2.0 * k / M);
    }
    return 0.0;
  });
  return out;
}

SpectralField dyadic_band_sum(const SpectralField& f, double m_min, double m_max,
                              Modulus modulus) {
  if (!(m_min > 0.0) || !(m_max >= m_min)) {
    throw std::invalid_argument("dyadic_band_sum: need 0 < m_min <= m_max");
  }
  SpectralField sum(f.context());
  for (double M = m_min; M <= m_max * (1.0 + 1e-12); M *= 2.0) {
    sum += project(f, M, ProjectMode::band, modulus);
  }
  return sum;
}

SpectralField riesz_apply(const SpectralField& f, std::span<const RieszFactor> pattern) {
  if (pattern.empty()) throw std::invalid_argument("riesz_apply: empty pattern");
  SpectralField out = f;
  out.apply([pattern](double kx, double ky) {
    double s = 1.0;
    for (const auto& factor : pattern) s *= factor_symbol(factor, kx, ky);
    return s;
  });
  return out;
}

double riesz_symbol_max(const Grid2D& g, std::span<const RieszFactor> pattern) {
  double m = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.nky(); ++j) {
      double s = 1.0;
      for (const auto& factor : pattern) s *= factor_symbol(factor, g.kx(i), g.ky(j));
      m = std::max(m, std::abs(s));
    }
  }
  return m;
}

SpectralField riesz_potential(const SpectralField& f, double a, double b) {
  SpectralField out = f;
  out.apply([=](double kx, double ky) {
    const double k2 = kx * kx + ky * ky;
    if (a != 0.0 && k2 == 0.0) return 0.0;
    const double homog = a == 0.0 ? 1.0 : std::pow(k2, 0.5 * a);
    return homog * std::pow(1.0 + k2, 0.5 * b);
  });
  return out;
}

double l1_norm(const SpectralField& f) {
  const PhysicalField p = f.to_physical();
  double sum = 0.0;
  for (double x : p.samples()) sum += std::abs(x);
  return sum * f.grid().dx() * f.grid().dy();
}

double lemma_ratio_diagnostic(const SpectralField& f, double alpha, double eps, double n0) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");

  // dxdy/(-Lap) has symbol -kx ky/|k|^2.
  const RieszFactor mixed{Axis::x, Axis::y, -1};
  const SpectralField rf = riesz_apply(f, std::span(&mixed, 1));
  const double lhs = l1_norm(riesz_potential(rf, alpha, n0));

  const SpectralField fx = deriv(f, Axis::x);
  const double f1 = l1_norm(f);
  const double fx1 = l1_norm(fx);
  const double interp = (f1 > 0.0 && fx1 > 0.0)
                            ? std::pow(f1, 1.0 - alpha + eps) * std::pow(fx1, alpha - eps)
                            : 0.0;
  const double rhs = interp + l1_norm(bessel(fx, n0 - 1.0 + alpha + eps));
  if (!(rhs > 0.0)) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

double riesz_bound_ratio(const SpectralField& f, std::span<const RieszFactor> pattern, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double lhs = l1_norm(riesz_apply(f, pattern));
  const double rhs = l1_norm(riesz_potential(f, -eps, 2.0 * eps));
  if (!(rhs > 0.0)) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace mhdlab
