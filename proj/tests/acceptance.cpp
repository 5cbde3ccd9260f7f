// Acceptance checks: one PASS/FAIL line per criterion.
//   acceptance fast   criteria 1-6, 9, 10
//   acceptance decay  criteria 7, 8 (512^2 runs, several minutes each)
//   acceptance        both

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mhdlab/diagnostics.hpp"
#include "mhdlab/harness.hpp"
#include "mhdlab/integrator.hpp"
#include "mhdlab/kernels.hpp"
#include "mhdlab/lp_decomp.hpp"
#include "mhdlab/nonlinear.hpp"
#include "mhdlab/spectral.hpp"
#include "test_util.hpp"

using namespace mhdlab;
using testutil::pi;

namespace {

int failures = 0;

void verdict(int n, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %d: %s  %s  (%.1f s)\n", n, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void timed(int n, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" threw: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  verdict(n, ok, detail, s);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel_l2(const SpectralField& a, const SpectralField& b) {
  return l2_norm(a - b) / std::max(l2_norm(b), 1e-300);
}

double linf_gap(const State& a, const State& b) {
  return std::max({(a.u - b.u).to_physical().max_abs(), (a.v - b.v).to_physical().max_abs(),
                   (a.psi - b.psi).to_physical().max_abs()});
}

double l2_gap(const State& a, const State& b) {
  const double du = l2_norm(a.u - b.u), dv = l2_norm(a.v - b.v), dp = l2_norm(a.psi - b.psi);
  return std::sqrt(du * du + dv * dv + dp * dp);
}

double l2_size(const State& a) {
  return std::sqrt(std::pow(l2_norm(a.u), 2) + std::pow(l2_norm(a.v), 2) + std::pow(l2_norm(a.psi), 2));
}

// Small Gaussian data at 256^2 on the default 64 pi box.
State small_data() {
  RunConfig c;
  return make_initial_data(Grid2D(c.nx, c.ny, c.lx, c.ly), c.ic_kind, c.amplitude, c.ic);
}

// Classical RK4 on phi'' + phi' + xi^2 phi = 0.
std::array<double, 2> mode_ode(double xi, double t, double p0, double p1) {
  const int steps = std::max(200, static_cast<int>(t * 400));
  const double h = t / steps;
  std::array<double, 2> y{p0, p1};
  auto f = [xi](std::array<double, 2> s) { return std::array<double, 2>{s[1], -s[1] - xi * xi * s[0]}; };
  for (int k = 0; k < steps; ++k) {
    const auto k1 = f(y);
    const auto k2 = f({y[0] + h / 2 * k1[0], y[1] + h / 2 * k1[1]});
    const auto k3 = f({y[0] + h / 2 * k2[0], y[1] + h / 2 * k2[1]});
    const auto k4 = f({y[0] + h * k3[0], y[1] + h * k3[1]});
    for (int i = 0; i < 2; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return y;
}

bool kernel_oracle(std::string& d) {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> uxi(0.0, 4.0), ut(0.0, 20.0), ud(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double xi = uxi(rng), t = ut(rng), p0 = ud(rng), p1 = ud(rng);
    const double closed = khat(KernelId::K0, t, xi) * p0 + khat(KernelId::K1, t, xi) * (0.5 * p0 + p1);
    const auto ref = mode_ode(xi, t, p0, p1);
    // Relative to the solution size; near a zero crossing, to the e^{-t/2} envelope.
    const double scale = std::max(std::abs(ref[0]), std::exp(-0.5 * t) * (std::abs(p0) + std::abs(p1)));
    worst = std::max(worst, std::abs(closed - ref[0]) / scale);
  }
  d = fmt("200 cases, worst relative error %.2e (limit 1e-8)", worst);
  return worst <= 1e-8;
}

bool kernel_bounds(std::string& d) {
  std::vector<double> ts(200), xis(200);
  for (int k = 0; k < 200; ++k) {
    ts[k] = 50.0 * k / 199.0;
    xis[k] = -4.0 + 8.0 * k / 199.0;
  }
  const auto rep = check_kernel_bounds(ts, xis);
  d = fmt("200x200 grid t in [0,50], xi in [-4,4]: %.0f violations, max ratio %.4f", static_cast<double>(rep.failures()),
          rep.max_ratio);
  return rep.failures() == 0;
}

bool dual_forms(std::string& d) {
  std::mt19937_64 rng(1003);
  const Grid2D g = testutil::box(128, 16 * pi);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const State s = testutil::random_state(g, rng, 1e-2);
    worst = std::max(worst, pi_terms(s).equivalence_residual);
  }
  d = fmt("100 states at 128^2, worst relative L2 residual %.2e (limit 1e-9)", worst);
  return worst <= 1e-9;
}

bool energy_identity(std::string& d) {
  State s = small_data();
  const double e1 = energy(s);
  const double dt = 1e-2;
  double worst_step = 0.0;
  std::vector<EnergySample> hist{{s.t, e1, velocity_energy(s.u, s.v)}};
  for (int k = 1; k <= 900; ++k) {
    StepAudit a;
    s = step_primitive(s, dt, {}, &a);
    s.t = 1.0 + k * dt;
    worst_step = std::max(worst_step, std::abs(a.residual));
    hist.push_back({s.t, energy(s), velocity_energy(s.u, s.v)});
  }
  double worst_fd = 0.0;
  for (const auto& r : energy_report(hist)) worst_fd = std::max(worst_fd, std::abs(r.residual));
  d = fmt("E(1) = %.3e, per-step residual %.2e, step-cadence history residual %.2e (limit 1e-5 E(1))", e1,
          worst_step, worst_fd);
  return worst_step <= 1e-5 * e1 && worst_fd <= 1e-5 * e1;
}

bool formulation_equivalence(std::string& d) {
  State p = small_data();
  BState b = to_bform(p);
  const Complex psi0 = p.psi.mean(), v0 = p.v.mean();
  const double dt = 1e-2;
  double worst = 0.0, worst_rel = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double t = 1.0 + k * dt;
    p = step_primitive(p, dt);
    p.t = t;
    b = step_bform(b, dt);
    b.t = t;
    const State q = from_bform(b, psi0 - v0 * (1.0 - std::exp(-(t - 1.0))));
    const double gap = l2_gap(p, q);
    worst = std::max(worst, gap);
    worst_rel = std::max(worst_rel, gap / l2_size(p));
  }
  d = fmt("[1,3] at 256^2: max L2 gap %.2e (limit 1e-6), relative %.2e", worst, worst_rel);
  return worst <= 1e-6;
}

bool integrator_cross(std::string& d) {
  State p = small_data();
  SecondOrderState w(p, initial_time_derivatives(p));
  const double dt = 1e-2;
  double worst = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double t = 1.0 + k * dt;
    p = step_primitive(p, dt);
    p.t = t;
    w = step_duhamel(w, dt);
    w.t = t;
    worst = std::max(worst, linf_gap(w.primitive(), p));
  }
  d = fmt("[1,5] at 256^2, dt 1e-2: max Linf gap %.2e (limit 1e-4)", worst);
  return worst <= 1e-4;
}

bool lp_exactness(std::string& d) {
  std::mt19937_64 rng(1009);
  const Grid2D g = testutil::box(128, 16 * pi);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const SpectralField f = testutil::random_field(g, rng, 0.05);
    const double scale = f.max_abs_coeff();
    for (double M : {0.3, 1.0, 2.5, 7.0}) {
      const SpectralField id = project(f, M, ProjectMode::leq) + project(f, M, ProjectMode::gt);
      worst = std::max(worst, (id - f).max_abs_coeff() / scale);
    }
    const SpectralField tele = dyadic_band_sum(f, 0.25, 8.0);
    const SpectralField ref = project(f, 8.0, ProjectMode::leq) - project(f, 0.125, ProjectMode::leq);
    worst = std::max(worst, (tele - ref).max_abs_coeff() / scale);
  }
  d = fmt("10 random fields at 128^2: worst relative coefficient gap %.2e (limit 1e-12)", worst);
  return worst <= 1e-12;
}

bool property_suites(std::string& d) {
  std::mt19937_64 rng(1010);
  std::ostringstream os;
  bool ok = true;
  auto note = [&](const char* name, double v, double lim) {
    os << name << ' ' << fmt("%.1e", v) << ' ';
    ok = ok && v <= lim;
  };

  const Grid2D g(64, 32, 7.0, 3.0);
  {
    std::normal_distribution<double> n;
    PhysicalField p(g);
    for (double& x : p.samples()) x = n(rng);
    const PhysicalField back = p.to_spectral().to_physical();
    double e = 0.0;
    for (std::size_t k = 0; k < p.samples().size(); ++k)
      e = std::max(e, std::abs(back.samples()[k] - p.samples()[k]));
    note("roundtrip", e / p.max_abs(), 1e-12);
  }
  {
    auto [a, b] = leray_project(testutil::random_field(g, rng), testutil::random_field(g, rng));
    auto [c, e] = leray_project(a, b);
    note("leray", std::max(rel_l2(c, a), rel_l2(e, b)), 1e-13);
  }
  {
    const RieszFactor pat[] = {{Axis::x, Axis::x, 1}, {Axis::x, Axis::y, -1}, {Axis::y, Axis::y, 1}};
    double m = 0.0;
    for (std::size_t n = 1; n <= 3; ++n) m = std::max(m, riesz_symbol_max(g, std::span(pat, n)));
    note("riesz_max-1", m - 1.0, 0.0);
  }
  {
    std::vector<std::pair<double, double>> s1, s2;
    for (double t = 1.0; t <= 60.0; t *= 1.1) {
      const double v = std::pow(t, -0.8) * (1 + 0.05 * std::cos(t));
      s1.emplace_back(t, v);
      s2.emplace_back(t, 1e3 * v);
    }
    const double a = decay_fit(s1, {5, 50}).exponent, b = decay_fit(s2, {5, 50}).exponent;
    note("fit_scale", std::abs(a - b), 1e-12);
  }
  {
    const State s = testutil::random_state(testutil::box(64, 8 * pi), rng, 0.05);
    auto scaled = [&](double l) { return State(l * s.u, l * s.v, l * s.psi, s.t); };
    const auto [p1, p2] = pi_vector_form(s);
    const auto [q1, q2] = pi_vector_form(scaled(3.0));
    note("pi_quadratic", std::max(rel_l2(q1, 9.0 * p1), rel_l2(q2, 9.0 * p2)), 1e-12);
    // F carries quadratic and cubic parts: F(l) = A l^2 + B l^3.
    const ForcingTriple f1 = forcing_terms(s), f2 = forcing_terms(scaled(2.0)), f3 = forcing_terms(scaled(3.0));
    auto poly = [](const SpectralField& a, const SpectralField& b, const SpectralField& c) {
      const SpectralField B = 0.25 * (b - 4.0 * a);
      return rel_l2(c, 9.0 * (a - B) + 27.0 * B);
    };
    note("F_poly", std::max({poly(f1.f0, f2.f0, f3.f0), poly(f1.f1, f2.f1, f3.f1), poly(f1.f2, f2.f2, f3.f2)}),
         1e-10);
  }
  d = os.str();
  return ok;
}

// decay mode

std::map<std::string, std::vector<double>> read_csv(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
  }
  std::map<std::string, std::vector<double>> out;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::size_t k = 0;
    for (std::string c; std::getline(ss, c, ',') && k < cols.size(); ++k) out[cols[k]].push_back(std::stod(c));
  }
  return out;
}

void decay(const std::filesystem::path& work) {
  RunConfig base;
  base.nx = base.ny = 512;
  base.lx = base.ly = 64 * pi;
  base.amplitude = 1e-3;
  base.t_end = 50.0;
  base.dt = 0.05;
  base.cadence = 0.5;
  base.fit_lo = 5.0;
  base.fit_hi = 50.0;

  SweepSpec spec;
  spec.base = base;
  spec.axes = {{"ic.amplitude", {"1e-4", "1e-3", "1e-2"}}};
  spec.output_dir = work / "decay_sweep";
  std::filesystem::remove_all(spec.output_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const SweepReport rep = sweep(spec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const SweepPoint& mid = rep.points.at(1);
  {
    std::ostringstream os;
    bool ok = mid.ok;
    if (!mid.ok) os << "run failed: " << mid.error << ' ';
    for (const auto& f : mid.fits) {
      os << f.target.name << ' ';
      if (f.fit) os << fmt("%.3f (R2 %.3f) ", f.fit->exponent, f.fit->r_squared);
      else os << "n/a ";
      ok = ok && f.in_window;
    }
    // Amplitude independence of the v exponent.
    std::vector<double> ev;
    for (const auto& p : rep.points) {
      for (const auto& f : p.fits) {
        if (f.target.name == "v_inf" && f.fit) ev.push_back(f.fit->exponent);
      }
    }
    double spread = INFINITY;
    if (ev.size() == 3) spread = *std::max_element(ev.begin(), ev.end()) - *std::min_element(ev.begin(), ev.end());
    os << fmt("| v exponents over amplitudes 1e-4,1e-3,1e-2 spread %.3f (limit 0.1)", spread);
    ok = ok && spread <= 0.1;
    verdict(7, ok, os.str() + fmt(" | 3 runs at 512^2, %.0f s per run", secs / 3), secs);
  }
  {
    const auto series = read_csv(mid.dir / "series.csv");
    std::ostringstream os;
    bool ok = mid.ok && !series.empty();
    double worst = 0.0;
    std::string worst_key;
    const NormReport probe = norm_report(State(Grid2D(8, 8, 1.0, 1.0)), NormOptions{});
    for (const auto& c : probe.components) {
      if (c.group != NormGroup::X) continue;
      const auto it = series.find(c.key);
      if (it == series.end() || it->second.empty()) {
        ok = false;
        continue;
      }
      const double first = it->second.front();
      const double peak = *std::max_element(it->second.begin(), it->second.end());
      const double r = peak / first;
      if (!(r < 10.0)) ok = false;
      if (r > worst) {
        worst = r;
        worst_key = c.key;
      }
    }
    os << fmt("max over X components of max_t / value at t=1: %.3f", worst) << " (" << worst_key
       << ", limit 10)";
    verdict(8, ok, os.str(), 0.0);
  }
}

void fast() {
  timed(1, kernel_oracle);
  timed(2, kernel_bounds);
  timed(3, dual_forms);
  timed(4, energy_identity);
  timed(5, formulation_equivalence);
  timed(6, integrator_cross);
  timed(9, lp_exactness);
  timed(10, property_suites);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "all";
  if (mode != "fast" && mode != "decay" && mode != "all") {
    std::fprintf(stderr, "usage: acceptance [fast|decay|all]\n");
    return 2;
  }
  if (mode != "decay") fast();
  if (mode != "fast") {
    try {
      decay(std::filesystem::current_path());
    } catch (const std::exception& e) {
      verdict(7, false, std::string("threw: ") + e.what(), 0.0);
      verdict(8, false, "not evaluated", 0.0);
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
