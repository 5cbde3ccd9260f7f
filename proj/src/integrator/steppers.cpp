#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mhdlab/integrator.hpp"
#include "mhdlab/kernels.hpp"
#include "mhdlab/spectral.hpp"

namespace mhdlab {

CflViolation::CflViolation(double dt, double dt_max)
    : std::runtime_error("time step " + std::to_string(dt) + " exceeds CFL limit dt_max = " +
                         std::to_string(dt_max)),
      dt_max_(dt_max) {}

NumericalAbort::NumericalAbort(const std::string& what, double last_healthy_t)
    : std::runtime_error(what), last_healthy_t_(last_healthy_t) {}

namespace {

SpectralField dx(const SpectralField& f) { return deriv(f, Axis::x); }
SpectralField dy(const SpectralField& f) { return deriv(f, Axis::y); }

double cfl_limit(const Grid2D& g, double sx, double sy) {
  return 0.5 / (sx * g.kx_max_retained() + sy * g.ky_max_retained() + 1.0);
}

void check_cfl(double dt, double limit) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (dt > limit) throw CflViolation(dt, limit);
}

State axpy_state(const State& s, const Rates& r, double h) {
  State out = s;
  out.u.axpy(h, r.du);
  out.v.axpy(h, r.dv);
  out.psi.axpy(h, r.dpsi);
  return out;
}

Rates projected_rhs(const State& s, const Model& model) {
  Rates r = time_derivative_fields(s, model);
  auto [pu, pv] = leray_project(r.du, r.dv);
  r.du = std::move(pu);
  r.dv = std::move(pv);
  return r;
}

// Kernel multipliers for one step length, tabulated per x-index.
struct Propagator {
  std::vector<double> k0, k1, k0dot, k1dot;

  Propagator(const Grid2D& g, double h) {
    for (int i = 0; i < g.nx(); ++i) {
      const double xi = g.kx(i);
      k0.push_back(khat(KernelId::K0, h, xi));
      k1.push_back(khat(KernelId::K1, h, xi));
      k0dot.push_back(khat(KernelId::K0dot, h, xi));
      k1dot.push_back(khat(KernelId::K1dot, h, xi));
    }
  }
};

// Advances one component. `f_end` may alias `f_start` (predictor pass).
void duhamel_component(const Propagator& p, double h, const SpectralField& phi,
                       const SpectralField& phit, const SpectralField& f_start,
                       const SpectralField& f_end, SpectralField& phi_out,
                       SpectralField& phit_out) {
  const Grid2D& g = phi.grid();
  const int nky = g.nky();
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < nky; ++j) {
      const Complex a = phi(i, j);
      const Complex half = 0.5 * a + phit(i, j);
      const Complex f0 = f_start(i, j);
      phi_out(i, j) = p.k0[i] * a + p.k1[i] * half + 0.5 * h * p.k1[i] * f0;
      phit_out(i, j) =
          p.k0dot[i] * a + p.k1dot[i] * half + 0.5 * h * (p.k1dot[i] * f0 + f_end(i, j));
    }
  }
}

SecondOrderState duhamel_pass(const SecondOrderState& s, const Propagator& p, double h,
                              const ForcingTriple& f_start, const ForcingTriple& f_end) {
  SecondOrderState out = s;
  duhamel_component(p, h, s.psi, s.psit, f_start.f0, f_end.f0, out.psi, out.psit);
  duhamel_component(p, h, s.u, s.ut, f_start.f1, f_end.f1, out.u, out.ut);
  duhamel_component(p, h, s.v, s.vt, f_start.f2, f_end.f2, out.v, out.vt);
  out.t = s.t + h;
  return out;
}

struct BRates {
  SpectralField du, dv, dbx, dby;
};

BRates bform_rhs(const BState& s, const Model& model) {
  SpectralField bx_fluct = s.bx;
  bx_fluct(0, 0) = 0.0;
  SpectralField by_fluct = s.by;
  by_fluct(0, 0) = 0.0;

  if (!model.nonlinear) {
    // Linearization about u = 0, b = (1, 0).
    SpectralField du = -s.u + dx(bx_fluct);
    SpectralField dv = -s.v + dx(by_fluct);
    auto [pu, pv] = leray_project(du, dv);
    return {std::move(pu), std::move(pv), dx(s.u), dx(s.v)};
  }

  const PhysicalField u = s.u.to_physical(), v = s.v.to_physical();
  const PhysicalField bx = s.bx.to_physical(), by = s.by.to_physical();
  const PhysicalField ux = dx(s.u).to_physical(), uy = dy(s.u).to_physical();
  const PhysicalField vx = dx(s.v).to_physical(), vy = dy(s.v).to_physical();
  const PhysicalField bxx = dx(s.bx).to_physical(), bxy = dy(s.bx).to_physical();
  const PhysicalField byx = dx(s.by).to_physical(), byy = dy(s.by).to_physical();

  PhysicalField w1 = bx * bxx;  // b.grad b - u.grad u
  w1.add_product(by, bxy);
  w1 -= u * ux;
  w1 -= v * uy;
  PhysicalField w2 = bx * byx;
  w2.add_product(by, byy);
  w2 -= u * vx;
  w2 -= v * vy;

  PhysicalField m1 = bx * ux;  // b.grad u - u.grad b
  m1.add_product(by, uy);
  m1 -= u * bxx;
  m1 -= v * bxy;
  PhysicalField m2 = bx * vx;
  m2.add_product(by, vy);
  m2 -= u * byx;
  m2 -= v * byy;

  SpectralField du = w1.to_dealiased() - s.u;
  SpectralField dv = w2.to_dealiased() - s.v;
  auto [pu, pv] = leray_project(du, dv);
  auto [pbx, pby] = leray_project(m1.to_dealiased(), m2.to_dealiased());
  return {std::move(pu), std::move(pv), std::move(pbx), std::move(pby)};
}

BState axpy_b(const BState& s, const BRates& r, double h) {
  BState out = s;
  out.u.axpy(h, r.du);
  out.v.axpy(h, r.dv);
  out.bx.axpy(h, r.dbx);
  out.by.axpy(h, r.dby);
  return out;
}

}  // namespace

double dt_max(const State& s) {
  const double bx = 1.0 + dy(s.psi).to_physical().max_abs();
  const double by = dx(s.psi).to_physical().max_abs();
  return cfl_limit(s.grid(), s.u.to_physical().max_abs() + bx,
                   s.v.to_physical().max_abs() + by);
}

double dt_max(const BState& s) {
  return cfl_limit(s.grid(), s.u.to_physical().max_abs() + s.bx.to_physical().max_abs(),
                   s.v.to_physical().max_abs() + s.by.to_physical().max_abs());
}

Rates initial_time_derivatives(const State& s, const Model& model) {
  return time_derivative_fields(s, model);
}

State step_primitive(const State& s, double dt, const Model& model, StepAudit* audit) {
  check_cfl(dt, dt_max(s));
  const Rates k1 = projected_rhs(s, model);
  const State s2 = axpy_state(s, k1, 0.5 * dt);
  const Rates k2 = projected_rhs(s2, model);
  const State s3 = axpy_state(s, k2, 0.5 * dt);
  const Rates k3 = projected_rhs(s3, model);
  const State s4 = axpy_state(s, k3, dt);
  const Rates k4 = projected_rhs(s4, model);

  State out = s;
  const double w = dt / 6.0;
  out.u.axpy(w, k1.du).axpy(2 * w, k2.du).axpy(2 * w, k3.du).axpy(w, k4.du);
  out.v.axpy(w, k1.dv).axpy(2 * w, k2.dv).axpy(2 * w, k3.dv).axpy(w, k4.dv);
  out.psi.axpy(w, k1.dpsi).axpy(2 * w, k2.dpsi).axpy(2 * w, k3.dpsi).axpy(w, k4.dpsi);
  auto [pu, pv] = leray_project(out.u, out.v);
  out.u = std::move(pu);
  out.v = std::move(pv);
  out.t = s.t + dt;

  if (audit) {
    audit->energy_before = energy(s);
    audit->energy_after = energy(out);
    audit->u2_mean = (velocity_energy(s.u, s.v) + 2.0 * velocity_energy(s2.u, s2.v) +
                      2.0 * velocity_energy(s3.u, s3.v) + velocity_energy(s4.u, s4.v)) /
                     6.0;
    audit->residual = (audit->energy_after - audit->energy_before) / dt + 2.0 * audit->u2_mean;
  }
  return out;
}

SecondOrderState step_duhamel(const SecondOrderState& s, double dt, const Model& model) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const Propagator p(s.grid(), dt);
  const ForcingTriple f_start = forcing_terms(s.primitive(), s.rates(), model);
  if (!model.nonlinear) return duhamel_pass(s, p, dt, f_start, f_start);

  const SecondOrderState predicted = duhamel_pass(s, p, dt, f_start, f_start);
  const ForcingTriple f_end = forcing_terms(predicted.primitive(), predicted.rates(), model);
  return duhamel_pass(s, p, dt, f_start, f_end);
}

BState step_bform(const BState& s, double dt, const Model& model, StepAudit* audit) {
  check_cfl(dt, dt_max(s));
  const BRates k1 = bform_rhs(s, model);
  const BState s2 = axpy_b(s, k1, 0.5 * dt);
  const BRates k2 = bform_rhs(s2, model);
  const BState s3 = axpy_b(s, k2, 0.5 * dt);
  const BRates k3 = bform_rhs(s3, model);
  const BState s4 = axpy_b(s, k3, dt);
  const BRates k4 = bform_rhs(s4, model);

  BState out = s;
  const double w = dt / 6.0;
  out.u.axpy(w, k1.du).axpy(2 * w, k2.du).axpy(2 * w, k3.du).axpy(w, k4.du);
  out.v.axpy(w, k1.dv).axpy(2 * w, k2.dv).axpy(2 * w, k3.dv).axpy(w, k4.dv);
  out.bx.axpy(w, k1.dbx).axpy(2 * w, k2.dbx).axpy(2 * w, k3.dbx).axpy(w, k4.dbx);
  out.by.axpy(w, k1.dby).axpy(2 * w, k2.dby).axpy(2 * w, k3.dby).axpy(w, k4.dby);
  {
    auto [pu, pv] = leray_project(out.u, out.v);
    out.u = std::move(pu);
    out.v = std::move(pv);
    auto [pbx, pby] = leray_project(out.bx, out.by);
    out.bx = std::move(pbx);
    out.by = std::move(pby);
  }
  out.t = s.t + dt;

  if (audit) {
    audit->energy_before = energy(s);
    audit->energy_after = energy(out);
    audit->u2_mean = (velocity_energy(s.u, s.v) + 2.0 * velocity_energy(s2.u, s2.v) +
                      2.0 * velocity_energy(s3.u, s3.v) + velocity_energy(s4.u, s4.v)) /
                     6.0;
    audit->residual = (audit->energy_after - audit->energy_before) / dt + 2.0 * audit->u2_mean;
  }
  return out;
}

State from_bform(const BState& b, Complex mean_psi) {
  // Lap psi = dy b1 - dx b2; background and means drop out.
  SpectralField psi = inverse_laplacian(dy(b.bx) - dx(b.by));
  psi(0, 0) = mean_psi;
  return State(b.u, b.v, std::move(psi), b.t);
}

}  // namespace mhdlab
