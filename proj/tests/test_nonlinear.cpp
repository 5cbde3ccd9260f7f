#include <doctest.h>

#include <cmath>
#include <random>

#include "mhdlab/nonlinear.hpp"
#include "mhdlab/spectral.hpp"
#include "test_util.hpp"

using namespace mhdlab;
using namespace testutil;

namespace {

State scaled(const State& s, double lambda) {
  return State(lambda * s.u, lambda * s.v, lambda * s.psi, s.t);
}

// Plain RK4 along the primitive flow; h may be negative.
State rk4(const State& s, double h) {
  auto rhs = [](const State& x) { return time_derivative_fields(x); };
  auto add = [](const State& x, const Rates& r, double a) {
    State y = x;
    y.u.axpy(a, r.du);
    y.v.axpy(a, r.dv);
    y.psi.axpy(a, r.dpsi);
    return y;
  };
  const Rates k1 = rhs(s);
  const Rates k2 = rhs(add(s, k1, h / 2));
  const Rates k3 = rhs(add(s, k2, h / 2));
  const Rates k4 = rhs(add(s, k3, h));
  State out = s;
  for (auto [k, w] : {std::pair{&k1, 1.0}, {&k2, 2.0}, {&k3, 2.0}, {&k4, 1.0}}) {
    out.u.axpy(h * w / 6, k->du);
    out.v.axpy(h * w / 6, k->dv);
    out.psi.axpy(h * w / 6, k->dpsi);
  }
  return out;
}

double rel(const SpectralField& a, const SpectralField& b) {
  return l2_norm(a - b) / std::max(l2_norm(b), 1e-300);
}

}  // namespace

TEST_CASE("transport examples") {
  const Grid2D g = box(16);
  SpectralField one(g);
  one(0, 0) = 1.0;
  const SpectralField sx = from_fn(g, [](double x, double) { return std::sin(x); });
  const SpectralField cx = from_fn(g, [](double x, double) { return std::cos(x); });
  CHECK(max_abs_diff(transport(one, SpectralField(g), sx), cx) < 1e-14);

  std::mt19937_64 rng(30);
  const SpectralField k = from_fn(g, [](double, double) { return 4.0; });
  CHECK(transport(random_field(g, rng), random_field(g, rng), k).max_abs_coeff() < 1e-15);

  const SpectralField sy = from_fn(g, [](double, double y) { return std::sin(y); });
  const SpectralField ref = from_fn(g, [](double x, double y) { return std::sin(y) * std::cos(x); });
  CHECK(max_abs_diff(transport(sy, SpectralField(g), sx), ref) < 1e-14);
}

TEST_CASE("Pi examples") {
  const Grid2D g = box(16);
  const PiPair zero = pi_terms(State(g));
  CHECK(zero.pi1.max_abs_coeff() == 0.0);
  CHECK(zero.pi2.max_abs_coeff() == 0.0);
  CHECK(zero.equivalence_residual == 0.0);

  State mag(g);
  mag.psi = from_fn(g, [](double x, double) { return std::sin(x); });
  const PiPair pm = pi_terms(mag);
  CHECK(pm.pi1.to_physical().max_abs() < 1e-15);

  State shear(g);
  shear.u = from_fn(g, [](double, double y) { return std::sin(y); });
  const PiPair ps = pi_terms(shear);
  CHECK(ps.pi1.to_physical().max_abs() < 1e-15);
  CHECK(ps.pi2.to_physical().max_abs() < 1e-15);
}

TEST_CASE("dual forms agree on random dealiased states") {
  std::mt19937_64 rng(31);
  const Grid2D g = box(64);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const State s = random_state(g, rng, 1e-2);
    const PiPair p = pi_terms(s);
    worst = std::max(worst, p.equivalence_residual);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("time derivative examples") {
  const Grid2D g = box(16);
  const Rates z = time_derivative_fields(State(g));
  CHECK(z.du.max_abs_coeff() == 0.0);
  CHECK(z.dpsi.max_abs_coeff() == 0.0);

  State mag(g);
  mag.psi = from_fn(g, [](double x, double) { return std::sin(x); });
  const Rates rm = time_derivative_fields(mag);
  CHECK(rm.du.to_physical().max_abs() < 1e-14);
  CHECK(max_abs_diff(rm.dv, mag.psi) < 1e-14);
  CHECK(rm.dpsi.to_physical().max_abs() < 1e-14);

  State shear(g);
  shear.u = from_fn(g, [](double, double y) { return 0.3 * std::sin(y); });
  const Rates rs = time_derivative_fields(shear);
  CHECK(max_abs_diff(rs.du, -1.0 * shear.u) < 1e-15);
  CHECK(rs.dv.to_physical().max_abs() < 1e-15);
  CHECK(rs.dpsi.to_physical().max_abs() < 1e-15);

  std::mt19937_64 rng(32);
  const Rates rr = time_derivative_fields(random_state(box(32), rng, 0.1));
  CHECK(relative_divergence(rr.du, rr.dv) <= 1e-10);
}

TEST_CASE("forcing examples") {
  const Grid2D g = box(16);
  const ForcingTriple z = forcing_terms(State(g));
  CHECK(z.f0.max_abs_coeff() == 0.0);
  CHECK(z.f1.max_abs_coeff() == 0.0);
  CHECK(z.f2.max_abs_coeff() == 0.0);

  State mag(g);
  mag.psi = from_fn(g, [](double x, double) { return std::sin(x); });
  const ForcingTriple fm = forcing_terms(mag);
  CHECK(fm.f0.to_physical().max_abs() < 1e-14);

  std::mt19937_64 rng(33);
  const ForcingTriple f = forcing_terms(random_state(box(32), rng, 0.1));
  CHECK(f.f0.is_dealiased());
  CHECK(f.f1.is_dealiased());
  CHECK(f.f2.is_dealiased());

  const ForcingTriple off = forcing_terms(random_state(box(32), rng, 0.1), Model{false});
  CHECK(off.f1.max_abs_coeff() == 0.0);
}

TEST_CASE("forcing agrees with central differences along the flow") {
  std::mt19937_64 rng(34);
  const Grid2D g = box(32);
  const State s = random_state(g, rng, 0.2);
  const ForcingTriple f = forcing_terms(s);

  auto fd_error = [&](double h) {
    const State a = rk4(s, -h), b = rk4(s, h);
    const auto [pa1, pa2] = pi_vector_form(a);
    const auto [pb1, pb2] = pi_vector_form(b);
    const auto [p1, p2] = pi_vector_form(s);
    const SpectralField q = transport(s.u, s.v, s.psi);
    const SpectralField qa = transport(a.u, a.v, a.psi), qb = transport(b.u, b.v, b.psi);
    const double w = 1.0 / (2 * h);
    SpectralField f0 = -q - w * (qb - qa) - p2;
    SpectralField f1 = w * (pb1 - pa1) - deriv(deriv(q, Axis::x), Axis::y);
    SpectralField f2 = w * (pb2 - pa2) + deriv(q, Axis::x, 2);
    return std::max({rel(f.f0, f0), rel(f.f1, f1), rel(f.f2, f2)});
  };
  const double e1 = fd_error(1e-4);
  const double e2 = fd_error(5e-5);
  CHECK(e1 < 1e-5);
  CHECK(e2 < e1 / 3.0);  // second order in the step
}

TEST_CASE("Pi is exactly quadratic; F has only quadratic and cubic parts") {
  std::mt19937_64 rng(35);
  const Grid2D g = box(32);
  const State s = random_state(g, rng, 0.05);
  const auto [a1, a2] = pi_vector_form(s);
  for (double lambda : {0.5, 2.0, 3.0}) {
    const auto [b1, b2] = pi_vector_form(scaled(s, lambda));
    CHECK(rel(b1, lambda * lambda * a1) <= 1e-12);
    CHECK(rel(b2, lambda * lambda * a2) <= 1e-12);
  }

  const ForcingTriple f1 = forcing_terms(s);
  const ForcingTriple f2 = forcing_terms(scaled(s, 2.0));
  const ForcingTriple f3 = forcing_terms(scaled(s, 3.0));
  auto check_poly = [](const SpectralField& x1, const SpectralField& x2, const SpectralField& x3) {
    // x(lambda) = A lambda^2 + B lambda^3
    const SpectralField B = 0.25 * (x2 - 4.0 * x1);
    const SpectralField A = x1 - B;
    CHECK(rel(x3, 9.0 * A + 27.0 * B) <= 1e-10);
  };
  check_poly(f1.f0, f2.f0, f3.f0);
  check_poly(f1.f1, f2.f1, f3.f1);
  check_poly(f1.f2, f2.f2, f3.f2);
}

TEST_CASE("translation in x commutes with Pi and F") {
  std::mt19937_64 rng(36);
  const Grid2D g = box(32);
  const State s = random_state(g, rng, 0.1);
  const double shift = 0.37;
  const State ts(translate(s.u, shift, 0), translate(s.v, shift, 0), translate(s.psi, shift, 0), 1.0);
  const auto [p1, p2] = pi_vector_form(s);
  const auto [q1, q2] = pi_vector_form(ts);
  CHECK(max_abs_diff(q1, translate(p1, shift, 0)) <= 1e-12 * p1.to_physical().max_abs());
  CHECK(max_abs_diff(q2, translate(p2, shift, 0)) <= 1e-12 * p2.to_physical().max_abs());
  const ForcingTriple f = forcing_terms(s), tf = forcing_terms(ts);
  CHECK(max_abs_diff(tf.f1, translate(f.f1, shift, 0)) <= 1e-12 * f.f1.to_physical().max_abs());
  CHECK(max_abs_diff(tf.f0, translate(f.f0, shift, 0)) <= 1e-12 * f.f0.to_physical().max_abs());
}

TEST_CASE("alternate F0 grouping is reported, finite") {
  std::mt19937_64 rng(37);
  const State s = random_state(box(32), rng, 0.1);
  const double gap = f0_alternate_grouping_gap(s, time_derivative_fields(s));
  CHECK(std::isfinite(gap));
  CHECK(gap >= 0.0);
}
