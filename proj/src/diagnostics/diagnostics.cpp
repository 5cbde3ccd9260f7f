#include "mhdlab/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mhdlab/spectral.hpp"

namespace mhdlab {

namespace {

SpectralField dx(const SpectralField& f, int order = 1) { return deriv(f, Axis::x, order); }
SpectralField dy(const SpectralField& f, int order = 1) { return deriv(f, Axis::y, order); }

double linf_of(const SpectralField& f) { return f.to_physical().max_abs(); }

}  // namespace

double sobolev_norm(const SpectralField& f, double s, NormKind p) {
  const SpectralField g = bessel(f, s);
  return p == NormKind::l2 ? l2_norm(g) : linf_of(g);
}

double sobolev_norm(std::span<const SpectralField> fs, double s, NormKind p) {
  if (fs.empty()) return 0.0;
  if (p == NormKind::l2) {
    double sum = 0.0;
    for (const auto& f : fs) {
      const double n = l2_norm(bessel(f, s));
      sum += n * n;
    }
    return std::sqrt(sum);
  }
  PhysicalField mag2(fs.front().context());
  for (const auto& f : fs) {
    const PhysicalField g = bessel(f, s).to_physical();
    mag2.add_product(g, g);
  }
  double m = 0.0;
  for (double x : mag2.samples()) m = std::max(m, x);
  return std::sqrt(m);
}

WeightedL1 weighted_l1(const SpectralField& f, double w) {
  const Grid2D& g = f.grid();
  const PhysicalField p = f.to_physical();
  double sum = 0.0;
  double boundary = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    const double rx = g.x(i) - g.center_x();
    for (int j = 0; j < g.ny(); ++j) {
      const double ry = g.y(j) - g.center_y();
      const double a = std::abs(p(i, j));
      sum += std::pow(1.0 + rx * rx + ry * ry, 0.5 * w) * a;
      if (i == 0 || j == 0 || i == g.nx() - 1 || j == g.ny() - 1) boundary = std::max(boundary, a);
    }
  }
  const double peak = p.max_abs();
  return {sum * g.dx() * g.dy(), peak == 0.0 || boundary <= 1e-8 * peak};
}

// ---------------------------------------------------------------------------

const NormComponent& NormReport::at(std::string_view key) const {
  for (const auto& c : components) {
    if (c.key == key) return c;
  }
  throw std::out_of_range("no norm component '" + std::string(key) + "'");
}

namespace {

struct ComponentSpec {
  const char* key;
  NormGroup group;
  double power;  // NaN marks the -eps power of the top-order energy term
};

constexpr double kMinusEps = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<ComponentSpec, 21> kComponents{{
    {"x_sobN_u_gradpsi_l2", NormGroup::X, kMinusEps},
    {"x_sob3_psi_l2", NormGroup::X, 0.25},
    {"x_sob1_dxx_psi_linf", NormGroup::X, 1.5},
    {"x_sob3_dxx_psi_l2", NormGroup::X, 1.25},
    {"x_dxxx_psi_l2", NormGroup::X, 1.5},
    {"x_dt_u_linf", NormGroup::X, 1.5},
    {"x_sob1_dt_u_l2", NormGroup::X, 1.25},
    {"x_sob1_dx_u_linf", NormGroup::X, 1.0},
    {"x_dxdt_v_l2", NormGroup::X, 1.5},
    {"y_sob2_psi_linf", NormGroup::Y, 0.5},
    {"y_sob1_dx_psi_l2", NormGroup::Y, 0.75},
    {"y_dx_sob3_psi_linf", NormGroup::Y, 1.0},
    {"y_u_linf", NormGroup::Y, 1.0},
    {"y_v_linf", NormGroup::Y, 1.5},
    {"y_u_l2", NormGroup::Y, 0.75},
    {"y_dx_u_l2", NormGroup::Y, 1.25},
    {"y_v_l2", NormGroup::Y, 1.25},
    {"psi_linf", NormGroup::aux, 0.0},
    {"p_linf", NormGroup::aux, 0.0},
    {"energy", NormGroup::aux, 0.0},
    {"commutator_l2", NormGroup::aux, 0.0},
}};

}  // namespace

const std::vector<std::string>& norm_component_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& c : kComponents) k.emplace_back(c.key);
    return k;
  }();
  return keys;
}

NormReport norm_report(const State& s, const Rates& r, const NormOptions& opts) {
  if (!(s.t >= 1.0)) throw std::invalid_argument("norm_report: t must be >= 1");
  const SpectralField psi_x = dx(s.psi);
  const SpectralField psi_y = dy(s.psi);
  const SpectralField psi_xx = dx(s.psi, 2);
  const std::array<SpectralField, 4> top{s.u, s.v, psi_x, psi_y};
  const std::array<SpectralField, 2> vel_t{r.du, r.dv};
  const std::array<SpectralField, 2> vel_x{dx(s.u), dx(s.v)};

  std::vector<double> raw;
  raw.reserve(kComponents.size());
  raw.push_back(sobolev_norm(top, opts.N, NormKind::l2));
  raw.push_back(sobolev_norm(s.psi, 3, NormKind::l2));
  raw.push_back(sobolev_norm(psi_xx, 1, NormKind::linf));
  raw.push_back(sobolev_norm(psi_xx, 3, NormKind::l2));
  raw.push_back(l2_norm(dx(s.psi, 3)));
  raw.push_back(sobolev_norm(vel_t, 0, NormKind::linf));
  raw.push_back(sobolev_norm(vel_t, 1, NormKind::l2));
  raw.push_back(sobolev_norm(vel_x, 1, NormKind::linf));
  raw.push_back(l2_norm(dx(r.dv)));

  raw.push_back(sobolev_norm(s.psi, 2, NormKind::linf));
  raw.push_back(sobolev_norm(psi_x, 1, NormKind::l2));
  raw.push_back(sobolev_norm(psi_x, 3, NormKind::linf));
  raw.push_back(linf_of(s.u));
  raw.push_back(linf_of(s.v));
  raw.push_back(l2_norm(s.u));
  raw.push_back(l2_norm(dx(s.u)));
  raw.push_back(l2_norm(s.v));

  raw.push_back(linf_of(s.psi));
  raw.push_back(linf_of(pressure_recover(s)));
  raw.push_back(energy(s));
  {
    const SpectralField cu = commutator(s.u, s.v, s.u, opts.N);
    const SpectralField cv = commutator(s.u, s.v, s.v, opts.N);
    raw.push_back(std::hypot(l2_norm(cu), l2_norm(cv)));
  }

  NormReport report;
  report.t = s.t;
  report.components.reserve(kComponents.size());
  for (std::size_t k = 0; k < kComponents.size(); ++k) {
    const auto& spec = kComponents[k];
    const double power = std::isnan(spec.power) ? -opts.eps : spec.power;
    report.components.push_back(
        {spec.key, spec.group, power, raw[k], raw[k] * std::pow(s.t, power)});
  }
  return report;
}

NormReport norm_report(const State& s, const NormOptions& opts, const Model& model) {
  return norm_report(s, time_derivative_fields(s, model), opts);
}

NormReport norm_report(const SecondOrderState& s, const NormOptions& opts) {
  return norm_report(s.primitive(), s.rates(), opts);
}

SpectralField pressure_recover(const State& s) {
  const PhysicalField u = s.u.to_physical(), v = s.v.to_physical();
  const PhysicalField px = dx(s.psi).to_physical(), py = dy(s.psi).to_physical();

  PhysicalField txx = px * px;
  txx.add_product(u, u);
  PhysicalField txy = px * py;
  txy.add_product(u, v);
  PhysicalField tyy = py * py;
  tyy.add_product(v, v);

  // d_a d_b / (-Lap) is minus the nonlocal symbol k_a k_b / |k|^2.
  SpectralField p = -2.0 * dy(s.psi);
  p -= nonlocal(txx.to_dealiased(), Axis::x, Axis::x);
  p -= 2.0 * nonlocal(txy.to_dealiased(), Axis::x, Axis::y);
  p -= nonlocal(tyy.to_dealiased(), Axis::y, Axis::y);
  p(0, 0) = 0.0;
  return p;
}

SpectralField commutator(const SpectralField& u, const SpectralField& v, const SpectralField& f,
                         double sigma) {
  const PhysicalField pu = u.to_physical(), pv = v.to_physical();
  auto advect = [&](const SpectralField& g) {
    PhysicalField acc = pu * dx(g).to_physical();
    acc.add_product(pv, dy(g).to_physical());
    return acc.to_dealiased();
  };
  return bessel(advect(f), sigma) - advect(bessel(f, sigma));
}

// ---------------------------------------------------------------------------

DecayFit decay_fit(std::span<const std::pair<double, double>> series,
                   std::pair<double, double> window) {
  const auto [lo, hi] = window;
  if (!(lo < hi)) throw FitError("fit window must satisfy t_lo < t_hi");
  std::vector<double> xs, ys;
  for (const auto& [t, value] : series) {
    if (t < lo || t > hi) continue;
    if (!(value > 0.0) || !(t > 0.0)) throw FitError("nonpositive series");
    xs.push_back(std::log(t));
    ys.push_back(std::log(value));
  }
  const std::size_t n = xs.size();
  if (n < 8) {
    throw FitError("too few samples in window (" + std::to_string(n) + " < 8)");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ddx = xs[k] - mx, ddy = ys[k] - my;
    sxx += ddx * ddx;
    sxy += ddx * ddy;
    syy += ddy * ddy;
  }
  if (!(sxx > 0.0)) throw FitError("degenerate window: all samples at one time");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double sse = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = ys[k] - (fit.intercept + fit.exponent * xs[k]);
    sse += e * e;
  }
  fit.standard_error = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  // A perfectly flat series is explained exactly by slope zero.
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.window = window;
  fit.samples = n;
  return fit;
}

// ---------------------------------------------------------------------------

double velocity_energy(const SpectralField& u, const SpectralField& v) {
  return l2_inner(u, u) + l2_inner(v, v);
}

double energy(const State& s) {
  return velocity_energy(s.u, s.v) + velocity_energy(dx(s.psi), dy(s.psi));
}

double energy(const BState& s) {
  SpectralField bx = s.bx, by = s.by;
  bx(0, 0) = 0.0;
  by(0, 0) = 0.0;
  return velocity_energy(s.u, s.v) + velocity_energy(bx, by);
}

std::vector<EnergyRow> energy_report(std::span<const EnergySample> h) {
  const std::size_t n = h.size();
  std::vector<EnergyRow> rows;
  rows.reserve(n);
  for (const auto& s : h) rows.push_back({s.t, s.energy, s.u2, 0.0});
  if (n == 0) return rows;
  if (n == 1) {
    rows[0].residual = std::numeric_limits<double>::quiet_NaN();
    return rows;
  }

  const double step = (h.back().t - h.front().t) / static_cast<double>(n - 1);
  if (!(step > 0.0)) throw std::invalid_argument("energy_report: times must increase");
  for (std::size_t k = 1; k < n; ++k) {
    const double d = h[k].t - h[k - 1].t;
    if (std::abs(d - step) > 1e-6 * step) {
      throw std::invalid_argument("energy_report: history spacing is not uniform");
    }
  }

  auto e = [&](std::size_t k) { return h[k].energy; };
  std::vector<double> de(n);
  if (n < 5) {
    // Too short for the fourth-order stencils; second order where possible.
    for (std::size_t k = 0; k < n; ++k) {
      if (n == 2) de[k] = (e(1) - e(0)) / step;
      else if (k == 0) de[k] = (-3.0 * e(0) + 4.0 * e(1) - e(2)) / (2.0 * step);
      else if (k == n - 1) de[k] = (3.0 * e(k) - 4.0 * e(k - 1) + e(k - 2)) / (2.0 * step);
      else de[k] = (e(k + 1) - e(k - 1)) / (2.0 * step);
    }
  } else {
    const double w = 12.0 * step;
    de[0] = (-25.0 * e(0) + 48.0 * e(1) - 36.0 * e(2) + 16.0 * e(3) - 3.0 * e(4)) / w;
    de[1] = (-3.0 * e(0) - 10.0 * e(1) + 18.0 * e(2) - 6.0 * e(3) + e(4)) / w;
    for (std::size_t k = 2; k + 2 < n; ++k) {
      de[k] = (e(k - 2) - 8.0 * e(k - 1) + 8.0 * e(k + 1) - e(k + 2)) / w;
    }
    const std::size_t m = n - 1;
    de[m - 1] = (3.0 * e(m) + 10.0 * e(m - 1) - 18.0 * e(m - 2) + 6.0 * e(m - 3) - e(m - 4)) / w;
    de[m] = (25.0 * e(m) - 48.0 * e(m - 1) + 36.0 * e(m - 2) - 16.0 * e(m - 3) + 3.0 * e(m - 4)) / w;
  }
  for (std::size_t k = 0; k < n; ++k) rows[k].residual = de[k] + 2.0 * h[k].u2;
  return rows;
}

std::vector<EnergyRow> energy_report(std::span<const State> history) {
  std::vector<EnergySample> samples;
  samples.reserve(history.size());
  for (const auto& s : history) samples.push_back({s.t, energy(s), velocity_energy(s.u, s.v)});
  return energy_report(samples);
}

}  // namespace mhdlab
