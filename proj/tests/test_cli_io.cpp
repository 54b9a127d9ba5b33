#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "fchlab/config.hpp"
#include "fchlab/presets.hpp"
#include "fchlab/report_io.hpp"
#include "fchlab/snapshot.hpp"
#include "support.hpp"

using namespace fch;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fchlab_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

RunConfig quick(const std::string& preset) {
  RunConfig c = preset_config(preset);
  c.sim.n = 256;
  c.sim.horizon = 0.5;
  c.sim.diagnostics_every = 0.1;
  return c;
}

}  // namespace

TEST_CASE("empty config gives defaults") {
  const RunConfig c = parse_config("");
  const SimConfig d;
  CHECK(c.sim.a == d.a);
  CHECK(c.sim.n == d.n);
  CHECK(c.sim.length == d.length);
  CHECK(c.sim.horizon == d.horizon);
  CHECK(c.sim.dealias == d.dealias);
  CHECK(c.keys.empty());
}

TEST_CASE("overrides, comments and blank lines") {
  const RunConfig c = parse_config("# header\na=1.5\n\nT=5   # five\n dealias = off \nN=1024\nbesov_r=inf\n");
  CHECK(c.sim.a == 1.5);
  CHECK(c.picard.a == 1.5);
  CHECK(c.sim.horizon == 5.0);
  CHECK_FALSE(c.sim.dealias);
  CHECK(c.sim.n == 1024);
  CHECK(c.picard.n == 1024);
  REQUIRE(c.sim.besov.has_value());
  CHECK(std::isinf(c.sim.besov->r));
  CHECK(c.keys == std::vector<std::string>{"a", "T", "dealias", "N", "besov_r"});
}

TEST_CASE("bad values name the line and key") {
  try {
    parse_config("a=banana");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
    CHECK(e.key() == "a");
    CHECK(std::string(e.what()).find("banana") != std::string::npos);
  }
  try {
    parse_config("a=1\n\nwidth=3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.key() == "width");
  }
  try {
    parse_config("T=1\nT=2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse_config("a=1\n", {"a", "T"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "T");
  }
  CHECK_THROWS_AS(parse_config("N=-4"), ConfigError);
  CHECK_THROWS_AS(parse_config("dealias=maybe"), ConfigError);
  CHECK_THROWS_AS(parse_config("just words"), ConfigError);
}

TEST_CASE("format_config round-trips") {
  RunConfig c = preset_config("breaking_a1");
  c.sim.besov = BesovParams{0.5, 2.0, std::numeric_limits<double>::infinity()};
  c.sim.courant = 0.123456789012345;
  const RunConfig back = parse_config(format_config(c));
  CHECK(format_config(back) == format_config(c));
  CHECK(back.sim.courant == c.sim.courant);
  CHECK(back.sim.blowup_threshold == c.sim.blowup_threshold);
  CHECK(back.sim.preset == "breaking_a1");
  CHECK(config_help().find("blowup_threshold") != std::string::npos);
}

TEST_CASE("snapshot round trip is bit exact") {
  const PeriodicGrid g(128, 40.0);
  fch::test::Rng rng(71);
  Field f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = rng.range(-1, 1) * std::pow(10.0, rng.range(-300, 300));
  const auto back = parse_snapshot(format_snapshot(f, 1.5, 0.1));
  CHECK(back.field.grid() == g);
  CHECK(back.a == 1.5);
  CHECK(back.t == 0.1);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(back.field[j] == f[j]);

  const fs::path dir = scratch("snap");
  save_snapshot(f, 2.0, 3.25, (dir / "s.txt").string());
  const auto disk = load_snapshot((dir / "s.txt").string());
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(disk.field[j] == f[j]);
  CHECK(disk.t == 3.25);
  CHECK(parse_snapshot("# comment\n" + format_snapshot(f, 1.0, 0.0)).field.size() == 128);
}

TEST_CASE("short or malformed snapshots are rejected") {
  const PeriodicGrid g(512, 40.0);
  const std::string text = format_snapshot(Field(g), 1.0, 0.0);
  const std::string cut = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  const std::string msg = error_of([&] { parse_snapshot(cut); });
  CHECK(msg.find("N=512") != std::string::npos);
  CHECK(msg.find("511") != std::string::npos);
  CHECK_THROWS_AS(parse_snapshot("N=8\nL=1\na=1\n"), SnapshotError);
  CHECK_THROWS_AS(parse_snapshot("L=1\nN=8\na=1\nt=0\n"), SnapshotError);
  CHECK_THROWS_AS(parse_snapshot("N=eight\nL=1\na=1\nt=0\n"), SnapshotError);
  CHECK_THROWS_AS(parse_snapshot("N=6\nL=1\na=1\nt=0\n1\n2\n3\n4\n5\n6\n"), SnapshotError);
  CHECK_THROWS_AS(load_snapshot("/nonexistent/fchlab/snapshot.txt"), SnapshotError);
}

TEST_CASE("preset catalogue") {
  CHECK(preset_names().size() == 5);
  const std::string msg = error_of([] { preset_config("nope"); });
  for (const auto& n : preset_names()) CHECK(msg.find(n) != std::string::npos);

  const Field m13 = preset_initial_momentum(preset_config("thm13_positive").sim);
  CHECK(m13.min() >= 0.0);
  const Field m14 = preset_initial_momentum(preset_config("thm14_odd").sim);
  CHECK(odd_defect(m14) <= 1e-150);  // only the unpaired node x = -L/2 contributes
  const SimConfig pk = preset_config("peakon_a1").sim;
  CHECK(pk.n == 1024);
  const Field u = filtered_peakon(pk.grid(), 1.0);
  CHECK(u[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(u.max() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("translation fit recovers a known shift") {
  const PeriodicGrid g(256, 2 * std::numbers::pi);
  auto bump = [](double x) { return std::exp(std::cos(x)); };
  const Field u0 = Field::from_function(g, bump);
  const Field ut = Field::from_function(g, [&](double x) { return bump(x - 0.73); });
  const auto fit = fit_translation(u0, ut, 2.0);
  CHECK(fit.shift == doctest::Approx(0.73).epsilon(1e-8));
  CHECK(fit.speed == doctest::Approx(0.365).epsilon(1e-8));
  CHECK(fit.shape_error < 1e-8);
}

TEST_CASE("pipelines are deterministic to the byte and reload exactly") {
  const RunConfig cfg = quick("thm14_odd");
  const auto a = run_pipeline(cfg);
  const auto b = run_pipeline(cfg);
  CHECK(diagnostics_csv(a.run) == diagnostics_csv(b.run));
  const fs::path da = scratch("det_a"), db = scratch("det_b");
  write_report(da.string(), a);
  write_report(db.string(), b);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(da)) {
    if (!e.is_regular_file()) continue;
    ++files;
    CHECK(slurp(e.path()) == slurp(db / fs::relative(e.path(), da)));
  }
  CHECK(files > 5);
  CHECK(fs::exists(da / "characteristics.csv"));
  CHECK(fs::exists(da / "report.json"));

  const RunReport back = load_run(da.string());
  REQUIRE(back.trajectory.size() == a.run.trajectory.size());
  for (std::size_t i = 0; i < back.trajectory.size(); ++i) {
    CHECK(back.trajectory[i].t == a.run.trajectory[i].t);
    CHECK(fch::test::max_diff(back.trajectory[i].m, a.run.trajectory[i].m) == 0.0);
  }
  CHECK(diagnostics_csv(back) == diagnostics_csv(a.run));
  CHECK(format_config(load_run_config(da.string())) == format_config(cfg));
}

TEST_CASE("the seed does not touch deterministic preset data") {
  RunConfig c = quick("thm13_positive");
  const auto a = run_pipeline(c);
  c.sim.seed = 99;
  const auto b = run_pipeline(c);
  CHECK(diagnostics_csv(a.run) == diagnostics_csv(b.run));
}

TEST_CASE("event CSV survives a reload") {
  RunConfig c = preset_config("breaking_a1");
  c.sim.horizon = 2.0;
  const auto res = run_pipeline(c);
  REQUIRE(res.run.blew_up());
  const fs::path d = scratch("events");
  write_report(d.string(), res);
  const RunReport back = load_run(d.string());
  REQUIRE(back.events.size() == res.run.events.size());
  CHECK(back.events.front().t == res.run.events.front().t);
  CHECK(back.events.front().value == res.run.events.front().value);
  CHECK(back.events.front().reason == res.run.events.front().reason);
  CHECK(fs::exists(d / "contrast_diagnostics.csv"));
}

TEST_CASE("output root follows the environment") {
  ::setenv("FCHLAB_OUTPUT_ROOT", "/tmp/somewhere", 1);
  CHECK(output_dir("x") == "/tmp/somewhere/x");
  ::unsetenv("FCHLAB_OUTPUT_ROOT");
  CHECK(output_dir("x") == "fchlab_out/x");
}
