#include <cmath>
#include <stdexcept>

#include "mhdlab/snapshot.hpp"
#include "mhdlab/spectral.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

namespace {

// A physical wavenumber k is a box mode if k * L / (2 pi) is an integer.
void require_box_mode(double k, double length, const char* what) {
  const double m = k * length / (2.0 * std::numbers::pi);
  if (std::abs(m - std::round(m)) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " is not a box wavenumber");
  }
}

State finish(State s) {
  s.u.dealias();
  s.v.dealias();
  s.psi.dealias();
  auto [pu, pv] = leray_project(s.u, s.v);
  s.u = std::move(pu);
  s.v = std::move(pv);
  s.t = 1.0;
  return s;
}

}  // namespace

InitialKind parse_initial_kind(const std::string& name) {
  if (name == "gaussian_vortex") return InitialKind::gaussian_vortex;
  if (name == "shear") return InitialKind::shear;
  if (name == "single_mode") return InitialKind::single_mode;
  if (name == "file") return InitialKind::file;
  throw std::invalid_argument("unknown initial data kind '" + name + "'");
}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::gaussian_vortex: return "gaussian_vortex";
    case InitialKind::shear: return "shear";
    case InitialKind::single_mode: return "single_mode";
    case InitialKind::file: return "file";
  }
  return "unknown";
}

State make_initial_data(const Grid2D& grid, InitialKind kind, double amplitude,
                        const InitialParams& params) {
  if (kind == InitialKind::file) {
    State s = read_snapshot(params.file);
    if (!(s.grid() == grid)) {
      throw std::invalid_argument("snapshot grid does not match the configured grid");
    }
    return finish(std::move(s));
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("initial amplitude must be finite and >= 0");
  }

  State s(grid);
  switch (kind) {
    case InitialKind::gaussian_vortex: {
      if (!(params.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
      const double cx = params.center_x < 0.0 ? grid.center_x() : params.center_x;
      const double cy = params.center_y < 0.0 ? grid.center_y() : params.center_y;
      const double inv = 1.0 / (2.0 * params.sigma * params.sigma);
      const SpectralField bump =
          sample(grid, [=](double x, double y) {
            const double dx = x - cx, dy = y - cy;
            return amplitude * std::exp(-(dx * dx + dy * dy) * inv);
          }).to_dealiased();
      s.psi = bump;
      s.u = -deriv(bump, Axis::y);
      s.v = deriv(bump, Axis::x);
      break;
    }
    case InitialKind::shear: {
      require_box_mode(params.shear_k, grid.ly(), "shear wavenumber");
      const double k = params.shear_k;
      s.u = sample(grid, [=](double, double y) { return amplitude * std::sin(k * y); })
                .to_spectral();
      break;
    }
    case InitialKind::single_mode: {
      require_box_mode(params.mode_kx, grid.lx(), "mode kx");
      require_box_mode(params.mode_ky, grid.ly(), "mode ky");
      const double kx = params.mode_kx, ky = params.mode_ky;
      s.psi = sample(grid, [=](double x, double y) { return amplitude * std::cos(kx * x + ky * y); })
                  .to_spectral();
      break;
    }
    case InitialKind::file: break;
  }
  return finish(std::move(s));
}

}  // namespace mhdlab
