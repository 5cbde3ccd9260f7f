#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mhdlab/harness.hpp"
#include "mhdlab/kernels.hpp"
#include "mhdlab/lp_decomp.hpp"

namespace {

using namespace mhdlab;

constexpr int kConfigError = 2;
constexpr int kNumericalAbort = 3;
constexpr int kRatesOut = 4;

int cmd_run(const std::string& path, bool assert_rates, bool echo) {
  const RunConfig cfg = load_config(path);
  if (echo) std::cout << echo_config(cfg) << "\n";
  const ExperimentReport rep = run_experiment(cfg);
  print_summary(std::cout, cfg, rep);
  if (rep.record.aborted) return kNumericalAbort;
  if (assert_rates && !rep.rates_ok()) return kRatesOut;
  return 0;
}

int cmd_sweep(const std::string& path) {
  const SweepSpec spec = load_sweep_spec(path);
  const SweepReport rep = sweep(spec);
  std::size_t failed = 0;
  for (const auto& p : rep.points) {
    std::cout << p.dir.string() << ": " << (p.ok ? "ok" : "failed: " + p.error) << "\n";
    failed += p.ok ? 0 : 1;
  }
  std::cout << "index: " << rep.index_csv.string() << "\n";
  return failed ? kNumericalAbort : 0;
}

int cmd_kernels(int nt, int nxi, double t_max, double xi_max, const std::string& out) {
  std::vector<double> ts, xis;
  for (int i = 0; i < nt; ++i) ts.push_back(t_max * i / std::max(1, nt - 1));
  for (int i = 0; i < nxi; ++i) xis.push_back(xi_max * i / std::max(1, nxi - 1));
  const KernelBoundReport rep = check_kernel_bounds(ts, xis);

  std::ofstream file;
  if (!out.empty()) file.open(out, std::ios::binary);
  std::ostream& os = out.empty() ? std::cout : file;
  os << "t,xi,kind,value,bound,ratio\n";
  char buf[160];
  for (const auto& s : rep.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", s.t, s.xi,
                  to_string(s.kind).c_str(), s.value, s.bound, s.ratio());
    os << buf;
  }
  std::cerr << rep.samples.size() << " samples, " << rep.failures()
            << " violations, max ratio " << rep.max_ratio << "\n";
  return rep.failures() ? 1 : 0;
}

int cmd_lemma(int n, const std::string& out) {
  // Anisotropic Gaussians of shrinking x-width; the ratio should stay bounded.
  const Grid2D grid(n, n, 16.0 * std::numbers::pi, 16.0 * std::numbers::pi);
  std::ofstream file;
  if (!out.empty()) file.open(out, std::ios::binary);
  std::ostream& os = out.empty() ? std::cout : file;
  os << "check,sigma_x,sigma_y,alpha,eps,n0,ratio\n";
  const RieszFactor xy{Axis::x, Axis::y, -1};
  const RieszFactor pattern[] = {xy, {Axis::x, Axis::x, 1}};
  char buf[160];
  for (double sx : {4.0, 2.0, 1.0, 0.5}) {
    for (double sy : {4.0, 1.0}) {
      const double cx = grid.center_x(), cy = grid.center_y();
      const SpectralField f = sample(grid, [&](double x, double y) {
                                const double a = (x - cx) / sx, b = (y - cy) / sy;
                                return std::exp(-0.5 * (a * a + b * b));
                              }).to_dealiased();
      for (double alpha : {0.25, 0.5, 1.0}) {
        for (double n0 : {0.0, 1.0}) {
          const double r = lemma_ratio_diagnostic(f, alpha, 0.01, n0);
          std::snprintf(buf, sizeof buf, "interpolation,%g,%g,%g,%g,%g,%.10g\n", sx, sy, alpha,
                        0.01, n0, r);
          os << buf;
        }
      }
      const double r = riesz_bound_ratio(f, pattern, 0.01);
      std::snprintf(buf, sizeof buf, "riesz,%g,%g,,%g,,%.10g\n", sx, sy, 0.01, r);
      os << buf;
    }
  }
  return 0;
}

int cmd_fit(const std::string& path, const std::string& column, const std::string& window) {
  const auto colon = window.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--window expects lo:hi");
  const double lo = std::stod(window.substr(0, colon));
  const double hi = std::stod(window.substr(colon + 1));

  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string h; std::getline(ss, h, ',');) header.push_back(h);
  }
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) col = i;
  }
  if (col == header.size()) throw std::invalid_argument("no column '" + column + "' in " + path);

  std::vector<std::pair<double, double>> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<std::string> cells;
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() <= col) continue;
    series.emplace_back(std::stod(cells[0]), std::stod(cells[col]));
  }
  const DecayFit fit = decay_fit(series, {lo, hi});
  std::printf("column %s window %g:%g samples %zu\nexponent %.6f\nstderr %.6g\nr_squared %.6f\n",
              column.c_str(), lo, hi, fit.samples, fit.exponent, fit.standard_error,
              fit.r_squared);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mhdlab: damped MHD decay laboratory"};
  app.require_subcommand(1);

  std::string run_path;
  bool assert_rates = false, echo = false;
  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("config", run_path)->required();
  run->add_flag("--assert-rates", assert_rates, "Exit 4 when a fitted rate is out of window");
  run->add_flag("--echo", echo, "Print the resolved config first");

  std::string sweep_path;
  auto* sw = app.add_subcommand("sweep", "Run a parameter sweep");
  sw->add_option("spec", sweep_path)->required();

  int nt = 200, nxi = 200;
  double t_max = 20.0, xi_max = 4.0;
  std::string kout;
  auto* kc = app.add_subcommand("kernels-check", "Tabulate kernel values against their bounds");
  kc->add_option("--nt", nt);
  kc->add_option("--nxi", nxi);
  kc->add_option("--t-max", t_max);
  kc->add_option("--xi-max", xi_max);
  kc->add_option("-o,--out", kout);

  int ln = 128;
  std::string lout;
  auto* lc = app.add_subcommand("lemma-check", "Tabulate L1 multiplier ratios");
  lc->add_option("--n", ln);
  lc->add_option("-o,--out", lout);

  std::string fit_path, column, window;
  auto* fit = app.add_subcommand("fit", "Fit a decay exponent to a CSV column");
  fit->add_option("csv", fit_path)->required();
  fit->add_option("--column", column)->required();
  fit->add_option("--window", window)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_path, assert_rates, echo);
    if (*sw) return cmd_sweep(sweep_path);
    if (*kc) return cmd_kernels(nt, nxi, t_max, xi_max, kout);
    if (*lc) return cmd_lemma(ln, lout);
    if (*fit) return cmd_fit(fit_path, column, window);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalAbort& e) {
    std::cerr << e.what() << " (last healthy t = " << e.last_healthy_t() << ")\n";
    return kNumericalAbort;
  } catch (const FitError& e) {
    std::cerr << "fit failed: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
