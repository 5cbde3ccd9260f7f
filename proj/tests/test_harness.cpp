#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mhdlab/harness.hpp"
#include "test_util.hpp"

using namespace mhdlab;
using testutil::pi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("mhdlab_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* kTiny = R"(grid.nx = 32
grid.ny = 32
grid.lx = 8*pi
grid.ly = 8pi
time.t_end = 1.4
time.dt = 0.02
diag.cadence = 0.1
)";

}  // namespace

TEST_CASE("empty config gives defaults") {
  const RunConfig c = parse_config("# nothing\n\n");
  const RunConfig d;
  CHECK(c.nx == d.nx);
  CHECK(c.lx == d.lx);
  CHECK(c.dt == d.dt);
  CHECK(c.stepper == Stepper::primitive);
  CHECK(c.fit_lo == 5.0);
}

TEST_CASE("pi expressions") {
  const RunConfig c = parse_config("grid.lx = 64*pi\ngrid.ly = pi/2\nic.sigma = 2.5\n");
  CHECK(c.lx == doctest::Approx(64 * pi));
  CHECK(c.ly == doctest::Approx(pi / 2));
  CHECK(c.ic.sigma == 2.5);
}

TEST_CASE("every problem is reported at once, by line") {
  try {
    parse_config("grid.nx = 33\ntime.stepr = bform\ntime.dt = abc\ngrid.nx = 64\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto& is = e.issues();
    REQUIRE(is.size() >= 3);
    CHECK(is[0].line <= is[1].line);
    bool suggested = false, bad_number = false, dup = false;
    for (const auto& i : is) {
      if (i.key == "time.stepr" && i.message.find("time.stepper") != std::string::npos) suggested = true;
      if (i.key == "time.dt" && i.line == 3) bad_number = true;
      if (i.key == "grid.nx" && i.line == 4) dup = true;
    }
    CHECK(suggested);
    CHECK(bad_number);
    CHECK(dup);
  }
}

TEST_CASE("t_end below one is refused with a clear message") {
  try {
    parse_config("time.t_end = 0.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("t_end must be") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("time.dt = 0.03\ndiag.cadence = 0.1\n"), ConfigError);
}

TEST_CASE("echo round trip") {
  RunConfig c = parse_config(kTiny);
  c.stepper = Stepper::duhamel;
  c.nonlinear = false;
  c.ic_kind = InitialKind::shear;
  const RunConfig back = parse_config(echo_config(c));
  CHECK(echo_config(back) == echo_config(c));
  CHECK(back.lx == c.lx);
  CHECK(back.stepper == Stepper::duhamel);
  CHECK_FALSE(back.nonlinear);
}

TEST_CASE("set_config_value") {
  RunConfig c;
  set_config_value(c, "ic.amplitude", "0.01");
  CHECK(c.amplitude == 0.01);
  CHECK_THROWS_AS(set_config_value(c, "ic.amplitud", "1"), ConfigError);
}

TEST_CASE("sweep spec parsing") {
  const SweepSpec s = parse_sweep_spec(std::string(kTiny) +
                                       "sweep.ic.amplitude = 1e-4, 1e-3\n"
                                       "sweep.time.stepper = primitive, bform\n"
                                       "sweep_parallelism = 2\n");
  CHECK(s.base.nx == 32);
  REQUIRE(s.axes.size() == 2);
  CHECK(s.axes[0].key == "ic.amplitude");
  CHECK(s.axes[0].values.size() == 2);
  CHECK(s.parallelism == 2);
  CHECK_THROWS_AS(parse_sweep_spec("sweep.ic.bogus = 1, 2\n"), ConfigError);
}

TEST_CASE("2x2 sweep writes one directory per point and an index") {
  const fs::path out = scratch("sweep22");
  SweepSpec s = parse_sweep_spec(std::string(kTiny) +
                                 "sweep.ic.amplitude = 1e-4, 1e-3\n"
                                 "sweep.time.stepper = primitive, bform\n");
  s.output_dir = out;
  s.parallelism = 2;
  const SweepReport r = sweep(s);
  REQUIRE(r.points.size() == 4);
  for (const auto& p : r.points) {
    CHECK(p.ok);
    CHECK(fs::exists(p.dir / "series.csv"));
    CHECK(fs::exists(p.dir / "config.txt"));
    CHECK(fs::exists(p.dir / "summary.txt"));
  }
  const std::string idx = slurp(r.index_csv);
  CHECK(idx.rfind("point,ic.amplitude,time.stepper,status", 0) == 0);
  CHECK(std::count(idx.begin(), idx.end(), '\n') == 5);
  fs::remove_all(out);
}

TEST_CASE("a one-point sweep reproduces a plain run byte for byte") {
  const fs::path out = scratch("sweep1");
  SweepSpec s = parse_sweep_spec(std::string(kTiny) + "sweep.ic.amplitude = 1e-3\n");
  s.output_dir = out;
  const SweepReport r = sweep(s);
  REQUIRE(r.points.size() == 1);

  RunConfig c = parse_config(kTiny);
  c.amplitude = 1e-3;
  c.csv = out / "direct.csv";
  run(c);
  CHECK(slurp(c.csv) == slurp(r.points[0].dir / "series.csv"));
  fs::remove_all(out);
}

TEST_CASE("runs are deterministic") {
  const fs::path out = scratch("det");
  RunConfig c = parse_config(kTiny);
  c.csv = out / "a.csv";
  run(c);
  c.csv = out / "b.csv";
  run(c);
  const std::string a = slurp(out / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(out / "b.csv"));
  fs::remove_all(out);
}

TEST_CASE("rate fitting over a record") {
  CHECK(rate_targets().size() == 4);
  RunConfig c = parse_config(kTiny);
  c.csv.clear();
  const RunRecord rec = run(c);
  const auto series = component_series(rec, "y_u_linf");
  CHECK(series.size() == rec.reports.size());
  // The window holds fewer than 8 samples, so every fit is skipped with a reason.
  const auto fits = fit_rates(rec, 1.0, 1.4);
  for (const auto& f : fits) {
    CHECK_FALSE(f.fit);
    CHECK_FALSE(f.error.empty());
    CHECK_FALSE(f.in_window);
  }
}
