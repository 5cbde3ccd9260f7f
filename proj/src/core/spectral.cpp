#include "mhdlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhdlab {

namespace {

Complex ipow(double k, int order) {
  // (i k)^order
  Complex r{1.0, 0.0};
  const Complex ik{0.0, k};
  for (int n = 0; n < order; ++n) r *= ik;
  return r;
}

double axis_k(const Grid2D& g, Axis a, int i, int j) {
  return a == Axis::x ? g.kx(i) : g.ky(j);
}

}  // namespace

SpectralField deriv(const SpectralField& f, Axis axis, int order) {
  if (order < 1) throw std::invalid_argument("derivative order must be positive");
  SpectralField out = f;
  const Grid2D& g = f.grid();
  const bool odd = order % 2 == 1;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.nky(); ++j) {
      const bool nyquist = axis == Axis::x ? g.is_nyquist_x(i) : g.is_nyquist_y(j);
      if (odd && nyquist) {
        out(i, j) = 0.0;
      } else {
        out(i, j) *= ipow(axis_k(g, axis, i, j), order);
      }
    }
  }
  return out;
}

SpectralField nonlocal(const SpectralField& f, Axis a, Axis b) {
  SpectralField out = f;
  const Grid2D& g = f.grid();
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.nky(); ++j) {
      const double k2 = g.k2(i, j);
      out(i, j) *= k2 > 0.0 ? axis_k(g, a, i, j) * axis_k(g, b, i, j) / k2 : 0.0;
    }
  }
  return out;
}

SpectralField inverse_laplacian(const SpectralField& f) {
  SpectralField out = f;
  out.apply([](double kx, double ky) {
    const double k2 = kx * kx + ky * ky;
    return k2 > 0.0 ? -1.0 / k2 : 0.0;
  });
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  SpectralField out = f;
  out.apply([](double kx, double ky) { return -(kx * kx + ky * ky); });
  return out;
}

SpectralField bessel(const SpectralField& f, double s) {
  SpectralField out = f;
  if (s == 0.0) return out;
  out.apply([s](double kx, double ky) { return std::pow(1.0 + kx * kx + ky * ky, 0.5 * s); });
  return out;
}

std::pair<SpectralField, SpectralField> leray_project(const SpectralField& u,
                                                      const SpectralField& v) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("leray_project: grid mismatch");
  SpectralField pu = u;
  SpectralField pv = v;
  const Grid2D& g = u.grid();
  for (int i = 0; i < g.nx(); ++i) {
    // Nyquist x-line has no well-defined sign of kx; treat kx as 0 there.
    const double kx = g.is_nyquist_x(i) ? 0.0 : g.kx(i);
    for (int j = 0; j < g.nky(); ++j) {
      const double ky = g.is_nyquist_y(j) ? 0.0 : g.ky(j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      const Complex dot = (kx * u(i, j) + ky * v(i, j)) / k2;
      pu(i, j) -= kx * dot;
      pv(i, j) -= ky * dot;
    }
  }
  return {std::move(pu), std::move(pv)};
}

SpectralField divergence(const SpectralField& u, const SpectralField& v) {
  return deriv(u, Axis::x) + deriv(v, Axis::y);
}

double relative_divergence(const SpectralField& u, const SpectralField& v) {
  const Grid2D& g = u.grid();
  double div_max = 0.0;
  double mag_max = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    const double kx = g.is_nyquist_x(i) ? 0.0 : g.kx(i);
    for (int j = 0; j < g.nky(); ++j) {
      const double ky = g.is_nyquist_y(j) ? 0.0 : g.ky(j);
      div_max = std::max(div_max, std::abs(kx * u(i, j) + ky * v(i, j)));
      mag_max = std::max({mag_max, std::abs(u(i, j)), std::abs(v(i, j))});
    }
  }
  return mag_max > 0.0 ? div_max / mag_max : 0.0;
}

double l2_inner(const SpectralField& f, const SpectralField& h) {
  const Grid2D& g = f.grid();
  const int nky = g.nky();
  double sum = 0.0;
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < nky; ++j) {
      // Columns 0 and ny/2 appear once in the half spectrum; all others twice.
      const double w = (j == 0 || j == g.ny() / 2) ? 1.0 : 2.0;
      sum += w * std::real(f(i, j) * std::conj(h(i, j)));
    }
  }
  return sum * g.area();
}

double l2_norm(const SpectralField& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }

double relative_l2_gap(const SpectralField& a, const SpectralField& b, double floor) {
  return l2_norm(a - b) / std::max(l2_norm(b), floor);
}

SpectralField translate(const SpectralField& f, double shift_x, double shift_y) {
  SpectralField out = f;
  out.apply([=](double kx, double ky) { return std::polar(1.0, -(kx * shift_x + ky * shift_y)); });
  return out;
}

}  // namespace mhdlab
