#pragma once

#include <filesystem>
#include <string>

#include "mhdlab/field.hpp"

namespace mhdlab {

/// Unknowns of the perturbed system: velocity (u, v) and the magnetic stream
/// function perturbation psi = phi - y, at time t >= 1.
struct State {
  SpectralField u;
  SpectralField v;
  SpectralField psi;
  double t = 1.0;

  explicit State(const Grid2D& grid, double time = 1.0)
      : u(grid), v(grid), psi(grid), t(time) {}
  State(SpectralField u_, SpectralField v_, SpectralField psi_, double time)
      : u(std::move(u_)), v(std::move(v_)), psi(std::move(psi_)), t(time) {}

  const Grid2D& grid() const noexcept { return u.grid(); }
};

/// Time derivatives (d_t u, d_t v, d_t psi) paired with a State.
struct Rates {
  SpectralField du;
  SpectralField dv;
  SpectralField dpsi;
};

/// (u, v, psi) together with their time derivatives, the unknowns of the
/// second-order damped-wave form of the system.
struct SecondOrderState {
  SpectralField u;
  SpectralField v;
  SpectralField psi;
  SpectralField ut;
  SpectralField vt;
  SpectralField psit;
  double t = 1.0;

  SecondOrderState(const State& s, Rates r)
      : u(s.u), v(s.v), psi(s.psi), ut(std::move(r.du)), vt(std::move(r.dv)),
        psit(std::move(r.dpsi)), t(s.t) {}

  State primitive() const { return State(u, v, psi, t); }
  Rates rates() const { return Rates{ut, vt, psit}; }
  const Grid2D& grid() const noexcept { return u.grid(); }
};

/// Velocity and full magnetic field b = (bx, by) (background included).
struct BState {
  SpectralField u;
  SpectralField v;
  SpectralField bx;
  SpectralField by;
  double t = 1.0;

  const Grid2D& grid() const noexcept { return u.grid(); }
};

/// b = grad^perp (y + psi) = (1 + psi_y, -psi_x).
BState to_bform(const State& s);

enum class InitialKind { gaussian_vortex, shear, single_mode, file };

struct InitialParams {
  // gaussian_vortex: psi0 = a G, velocity = a grad^perp G, G a Gaussian of width sigma.
  double sigma = 2.0;
  double center_x = -1.0;  // negative means box center
  double center_y = -1.0;
  // shear: u = a sin(k y)
  double shear_k = 1.0;
  // single_mode: psi0 = a cos(kx x + ky y)
  double mode_kx = 1.0;
  double mode_ky = 0.0;
  // file: snapshot path
  std::filesystem::path file;
};

/// Build initial data at t = 1. Velocity is dealiased and Leray-projected.
/// Throws std::invalid_argument for negative amplitude or wavenumbers that are
/// not box modes; SnapshotError for unreadable files.
State make_initial_data(const Grid2D& grid, InitialKind kind, double amplitude,
                        const InitialParams& params = {});

InitialKind parse_initial_kind(const std::string& name);
std::string to_string(InitialKind kind);

}  // namespace mhdlab
