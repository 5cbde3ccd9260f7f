#include "mhdlab/nonlinear.hpp"

#include <cmath>

#include "mhdlab/spectral.hpp"

namespace mhdlab {

namespace {

SpectralField dx(const SpectralField& f, int order = 1) { return deriv(f, Axis::x, order); }
SpectralField dy(const SpectralField& f, int order = 1) { return deriv(f, Axis::y, order); }
SpectralField dxy(const SpectralField& f) { return deriv(deriv(f, Axis::x), Axis::y); }

PhysicalField phys(const SpectralField& f) { return f.to_physical(); }

SpectralField prod(const PhysicalField& a, const PhysicalField& b) {
  return (a * b).to_dealiased();
}

double pair_norm(const SpectralField& a, const SpectralField& b) {
  return std::hypot(l2_norm(a), l2_norm(b));
}

}  // namespace

SpectralField transport(const SpectralField& u, const SpectralField& v, const SpectralField& f) {
  PhysicalField acc = phys(u) * phys(dx(f));
  acc.add_product(phys(v), phys(dy(f)));
  return acc.to_dealiased();
}

std::pair<SpectralField, SpectralField> pi_bilinear(const SpectralField& ua,
                                                    const SpectralField& va,
                                                    const SpectralField& psia,
                                                    const SpectralField& ub,
                                                    const SpectralField& vb,
                                                    const SpectralField& psib) {
  const PhysicalField pua = phys(ua);
  const PhysicalField pva = phys(va);
  const PhysicalField lap_a = phys(laplacian(psia));

  PhysicalField w1 = pua * phys(dx(ub));
  w1.add_product(pva, phys(dy(ub)));
  w1.add_product(lap_a, phys(dx(psib)));

  PhysicalField w2 = pua * phys(dx(vb));
  w2.add_product(pva, phys(dy(vb)));
  w2.add_product(lap_a, phys(dy(psib)));

  auto [p1, p2] = leray_project(w1.to_dealiased(), w2.to_dealiased());
  p1 *= -1.0;
  p2 *= -1.0;
  return {std::move(p1), std::move(p2)};
}

std::pair<SpectralField, SpectralField> pi_vector_form(const State& s) {
  return pi_bilinear(s.u, s.v, s.psi, s.u, s.v, s.psi);
}

std::pair<SpectralField, SpectralField> pi_expanded_form(const State& s) {
  const PhysicalField u = phys(s.u), v = phys(s.v);
  const PhysicalField ux = phys(dx(s.u)), uy = phys(dy(s.u)), vx = phys(dx(s.v));
  const PhysicalField px = phys(dx(s.psi)), py = phys(dy(s.psi));
  const PhysicalField pxx = phys(dx(s.psi, 2)), pyy = phys(dy(s.psi, 2)), pxy = phys(dxy(s.psi));

  const SpectralField u_ux = prod(u, ux);
  const SpectralField u_vx = prod(u, vx);
  const SpectralField py_pxx = prod(py, pxx);
  const SpectralField py_pxy = prod(py, pxy);
  const SpectralField px_pxx = prod(px, pxx);
  const SpectralField px_pxy = prod(px, pxy);
  const SpectralField px_pyy = prod(px, pyy);
  const SpectralField v_uy = prod(v, uy);

  SpectralField pi1 = -u_ux;
  pi1 -= v_uy;
  pi1 += nonlocal(u_vx, Axis::x, Axis::y);
  pi1 -= nonlocal(prod(v, ux), Axis::x, Axis::y);
  pi1 += nonlocal(u_ux, Axis::x, Axis::x);
  pi1 += nonlocal(v_uy, Axis::x, Axis::x);
  pi1 -= px_pxx;
  pi1 -= px_pyy;
  pi1 += nonlocal(py_pxx, Axis::x, Axis::y);
  pi1 += nonlocal(py_pxy, Axis::y, Axis::y);
  pi1 += nonlocal(px_pxx, Axis::x, Axis::x);
  pi1 += nonlocal(px_pyy, Axis::x, Axis::x);

  SpectralField pi2 = -2.0 * nonlocal(u_vx, Axis::x, Axis::x);
  pi2 += dx(prod(u, v));
  pi2 += 2.0 * nonlocal(u_ux, Axis::x, Axis::y);
  pi2 -= 2.0 * nonlocal(py_pxy, Axis::x, Axis::y);
  pi2 += nonlocal(px_pxx, Axis::x, Axis::y);
  pi2 += nonlocal(py_pxx, Axis::y, Axis::y);
  pi2 += nonlocal(px_pxy, Axis::y, Axis::y);
  // Needed for exactness; the commonly quoted form of this line omits it.
  pi2 -= nonlocal(py_pxx, Axis::x, Axis::x);

  return {std::move(pi1), std::move(pi2)};
}

PiPair pi_terms(const State& s) {
  auto [v1, v2] = pi_vector_form(s);
  auto [e1, e2] = pi_expanded_form(s);
  const double scale = pair_norm(v1, v2);
  const double gap = pair_norm(v1 - e1, v2 - e2);
  const double residual = scale > 0.0 ? gap / scale : gap;
  return {std::move(v1), std::move(v2), residual};
}

Rates time_derivative_fields(const State& s, const Model& model) {
  SpectralField du = -s.u + dxy(s.psi);
  SpectralField dv = -s.v - dx(s.psi, 2);
  SpectralField dpsi = -s.v;
  if (!model.nonlinear) return {std::move(du), std::move(dv), std::move(dpsi)};

  // One pass over the physical fields shared by Pi and the transport term.
  const PhysicalField u = phys(s.u), v = phys(s.v);
  const PhysicalField lap = phys(laplacian(s.psi));
  const PhysicalField px = phys(dx(s.psi)), py = phys(dy(s.psi));

  PhysicalField w1 = u * phys(dx(s.u));
  w1.add_product(v, phys(dy(s.u)));
  w1.add_product(lap, px);

  PhysicalField w2 = u * phys(dx(s.v));
  w2.add_product(v, phys(dy(s.v)));
  w2.add_product(lap, py);

  PhysicalField q = u * px;
  q.add_product(v, py);

  auto [p1, p2] = leray_project(w1.to_dealiased(), w2.to_dealiased());
  du -= p1;
  dv -= p2;
  dpsi -= q.to_dealiased();
  return {std::move(du), std::move(dv), std::move(dpsi)};
}

ForcingTriple forcing_terms(const State& s, const Rates& r, const Model& model) {
  if (!model.nonlinear) {
    const Grid2D& g = s.grid();
    return {SpectralField(g), SpectralField(g), SpectralField(g)};
  }
  const SpectralField q = transport(s.u, s.v, s.psi);
  SpectralField q_dot = transport(r.du, r.dv, s.psi);
  q_dot += transport(s.u, s.v, r.dpsi);

  auto [pi1, pi2] = pi_vector_form(s);
  auto [a1, a2] = pi_bilinear(r.du, r.dv, r.dpsi, s.u, s.v, s.psi);
  auto [b1, b2] = pi_bilinear(s.u, s.v, s.psi, r.du, r.dv, r.dpsi);

  SpectralField f0 = -q;
  f0 -= q_dot;
  f0 -= pi2;

  SpectralField f1 = a1 + b1;
  f1 -= dxy(q);

  SpectralField f2 = a2 + b2;
  f2 += dx(q, 2);

  return {std::move(f0), std::move(f1), std::move(f2)};
}

ForcingTriple forcing_terms(const State& s, const Model& model) {
  return forcing_terms(s, time_derivative_fields(s, model), model);
}

double f0_alternate_grouping_gap(const State& s, const Rates& r) {
  const ForcingTriple f = forcing_terms(s, r);
  auto [pi1, pi2] = pi_vector_form(s);
  const PhysicalField px = phys(dx(s.psi)), py = phys(dy(s.psi));

  SpectralField alt = -pi2;
  alt -= prod(phys(dxy(s.psi)), px);
  alt -= prod(phys(pi1), px);
  alt += prod(phys(dx(s.psi, 2)), py);
  alt -= prod(phys(pi2), py);
  alt -= prod(phys(s.u), phys(dx(r.dpsi)));
  alt -= prod(phys(s.v), phys(dy(r.dpsi)));
  return relative_l2_gap(alt, f.f0);
}

}  // namespace mhdlab
