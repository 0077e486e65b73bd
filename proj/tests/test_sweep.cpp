#include "qframe/config.hpp"
#include "qframe/sweep.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>

using namespace qframe;

namespace {

std::string csv_of(const SweepTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find("\r\n", pos);
    REQUIRE(end != std::string::npos);
    out.push_back(text.substr(pos, end - pos));
    pos = end + 2;
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(cell);
      cell.clear();
    } else {
      cell += ch;
    }
  }
  out.push_back(cell);
  return out;
}

RunConfig desk_quantum(const std::string& kind) {
  RunConfig run = preset("desk-scale-a");
  run.numerics.allow_out_of_regime = true;
  return parse_config("[state]\nkind = \"" + kind + "\"\n", run);
}

}  // namespace

TEST_CASE("preset names and lookup") {
  const auto names = preset_names();
  CHECK(names == std::vector<std::string>{"paper-main", "superfluid-sec4", "desk-scale-a",
                                          "desk-scale-b"});
  CHECK_THROWS_WITH_AS((void)preset("nope"), doctest::Contains("paper-main"), ConfigError);
}

TEST_CASE("paper-main derives T from L and v") {
  const auto run = preset("paper-main");
  CHECK(run.physical.dwell_time == doctest::Approx(1e-6).epsilon(1e-15));
  CHECK(run.physical.traversal_velocity == 1.0);
  CHECK(run.physical.wire_length == 1e-6);
}

TEST_CASE("desk presets realize their dimensionless groups") {
  for (const auto& [name, eps, rho, wT] :
       {std::tuple{"desk-scale-a", 1e-3, 1e-2, 1e5}, std::tuple{"desk-scale-b", 1e-4, 1e-1, 1e4}}) {
    const auto p = to_dimensionless(preset(name).physical);
    CHECK(p.mass_ratio == doctest::Approx(eps).epsilon(1e-14));
    CHECK(p.freq_ratio == doctest::Approx(rho).epsilon(1e-14));
    CHECK(p.dwell_angle == doctest::Approx(wT).epsilon(1e-12));
  }
}

TEST_CASE("superfluid geometry gives the acoustic wavelength") {
  CHECK(superfluid_geometry().acoustic_wavelength() == doctest::Approx(2.4e-6).epsilon(1e-15));
}

TEST_CASE("config overlay and round trip") {
  const std::string text = R"(
[atom]
mass = 2e-27
[frame]
amplitude = 0.5e-9
initial_phase = 0.25
[state]
kind = "squeezed"
r = 0.75
theta = 0.1
[sweep]
parameter = "r"
start = 0.0
stop = 2.0
count = 5
methods = ["closed_form", "husimi"]
[numerics]
ode_tol = 1e-9
)";
  const auto run = parse_config(text, preset("desk-scale-a"));
  CHECK(run.physical.atom_mass == 2e-27);
  CHECK(run.physical.amplitude == 0.5e-9);
  CHECK(run.state.kind == StateKind::squeezed);
  CHECK(run.state.r == 0.75);
  CHECK(run.sweep.grid == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(run.sweep.methods == std::vector<Method>{Method::closed_form, Method::husimi});
  CHECK(run.numerics.ode_tol == 1e-9);

  const auto again = parse_config(to_toml(run), default_run_config());
  CHECK(to_toml(again) == to_toml(run));
  CHECK(config_hash(again) == config_hash(run));
}

TEST_CASE("config errors") {
  const auto base = default_run_config();
  CHECK_THROWS_AS((void)parse_config("[atom]\nmas = 1.0\n", base), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[bogus]\n", base), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[atom\n", base), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[atom]\nmass = -1.0\n", base), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[sweep]\nparameter = \"X0\"\nvalues = [1.0, 1.0]\n", base),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config("[sweep]\nparameter = \"Q\"\nvalues = [1.0]\n", base),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config("[state]\nkind = \"cat\"\n", base), ConfigError);
  CHECK_THROWS_AS((void)parse_method_list("closed_form,,husimi"), ConfigError);
  CHECK_THROWS_AS((void)parse_method_list("husimi,husimi"), ConfigError);
  CHECK_THROWS_AS((void)load_config("/nonexistent/qframe.toml", base), ConfigError);
}

TEST_CASE("log grids include both ends") {
  const auto g = make_grid(1e-3, 1e1, 5, true);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 1e1);
  CHECK(g[2] == doctest::Approx(0.1));
}

TEST_CASE("config hash ignores the run name but not the physics") {
  auto a = preset("paper-main");
  auto b = a;
  b.name = "renamed";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.physical.amplitude *= 2.0;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("amplitude sweep scales quadratically") {
  auto run = parse_config("[sweep]\nparameter = \"X0\"\nvalues = [0.0, 0.5e-9, 1e-9, 2e-9]\n",
                          preset("paper-main"));
  const auto t = run_sweep(run, 2);
  REQUIRE(t.rows.size() == 4);
  const double ref = t.rows[2].outcomes[0].phase;
  CHECK(ref == doctest::Approx(0.4679436830184775).epsilon(1e-14));
  const double ratios[] = {0.0, 0.25, 1.0, 4.0};
  for (int i = 0; i < 4; ++i) {
    CHECK(t.rows[i].outcomes[0].phase / ref == doctest::Approx(ratios[i]).epsilon(1e-14));
  }
  CHECK(t.unit == "m");
}

TEST_CASE("squeeze sweep has non-increasing visibility") {
  auto run = desk_quantum("squeezed");
  run = parse_config("[sweep]\nparameter = \"r\"\nstart = 0.0\nstop = 4.0\ncount = 41\n", run);
  const auto t = run_sweep(run, 4);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].outcomes[0].visibility <= t.rows[i - 1].outcomes[0].visibility + 1e-15);
  }
}

TEST_CASE("phase unwrapping follows the grid") {
  auto run = desk_quantum("fock");
  run = parse_config("[sweep]\nparameter = \"N\"\nstart = 0\nstop = 60\ncount = 61\n", run);
  const auto t = run_sweep(run, 3);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const double step = t.rows[i].outcomes[0].unwrapped_phase - t.rows[i - 1].outcomes[0].unwrapped_phase;
    CHECK(step == doctest::Approx(0.25).epsilon(1e-9));  // kappa per quantum
    CHECK(std::abs(t.rows[i].outcomes[0].phase) <= std::numbers::pi);
  }
}

TEST_CASE("out-of-regime runs need permission") {
  auto run = preset("desk-scale-a");
  CHECK_THROWS_AS((void)run_sweep(run, 1), RegimeError);
  run.numerics.allow_out_of_regime = true;
  const auto t = run_sweep(run, 1);
  REQUIRE(t.rows.size() == 1);
  CHECK_FALSE(t.rows[0].regime_ok);
  CHECK_FALSE(t.rows[0].regime_summary.empty());
}

TEST_CASE("method and state mismatches are configuration errors") {
  auto classical = preset("paper-main");
  classical.sweep.methods = {Method::riccati_exact};
  CHECK_THROWS_AS((void)run_sweep(classical, 1), ConfigError);
  auto quantum = desk_quantum("coherent");
  quantum.sweep.methods = {Method::proper_time};
  CHECK_THROWS_AS((void)run_sweep(quantum, 1), ConfigError);
}

TEST_CASE("per-method failures are recorded in the row") {
  auto run = desk_quantum("squeezed");
  run.state.r = 30.0;  // Fock truncation beyond reach
  run.sweep.methods = {Method::closed_form, Method::fock_sum};
  const auto t = run_sweep(run, 1);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].outcomes[0].ok);
  CHECK_FALSE(t.rows[0].outcomes[1].ok);
  CHECK_FALSE(t.rows[0].outcomes[1].error.empty());
  CHECK(std::isnan(t.rows[0].pairwise[0]));
  CHECK_FALSE(has_total_failure(t));
}

TEST_CASE("CSV layout") {
  auto run = desk_quantum("thermal");
  run = parse_config(
      "[sweep]\nparameter = \"beta\"\nvalues = [0.5, 1.0, 2.0]\nmethods = [\"closed_form\", \"fock_sum\"]\n",
      run);
  const auto t = run_sweep(run, 2);
  const auto lines = lines_of(csv_of(t));
  REQUIRE(lines.size() == 4);
  const auto header = split(lines[0]);
  CHECK(header == std::vector<std::string>{
                      "index", "beta[1]", "regime_ok", "closed_form.visibility[1]",
                      "closed_form.phase[rad]", "closed_form.phase_unwrapped[rad]",
                      "closed_form.status", "fock_sum.visibility[1]", "fock_sum.phase[rad]",
                      "fock_sum.phase_unwrapped[rad]", "fock_sum.status",
                      "absdiff.closed_form-fock_sum[1]", "config_hash"});
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    REQUIRE(cells.size() == header.size());
    CHECK(cells[0] == std::to_string(i - 1));
    CHECK(cells.back() == t.rows[i - 1].config_hash);
    CHECK(std::stod(cells[11]) < 1e-10);
  }
}

TEST_CASE("JSON carries the schema version") {
  auto run = desk_quantum("coherent");
  const auto t = run_sweep(run, 1);
  std::ostringstream out;
  write_json(out, t);
  CHECK(out.str().find("\"schema_version\": \"1\"") != std::string::npos);
}

TEST_CASE("output is independent of the thread count") {
  auto run = desk_quantum("thermal");
  run = parse_config(
      "[sweep]\nparameter = \"beta\"\nstart = 0.1\nstop = 10.0\ncount = 24\nspacing = \"log\"\n"
      "methods = [\"closed_form\", \"fock_sum\", \"husimi\"]\n",
      run);
  const std::string one = csv_of(run_sweep(run, 1));
  CHECK(csv_of(run_sweep(run, 4)) == one);
  CHECK(csv_of(run_sweep(run, 7)) == one);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3) == 3);
  ::setenv("QFRAME_THREADS", "5", 1);
  CHECK(resolve_thread_count(0) == 5);
  ::setenv("QFRAME_THREADS", "zero", 1);
  CHECK_THROWS_AS((void)resolve_thread_count(0), ConfigError);
  ::unsetenv("QFRAME_THREADS");
  CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("compare report on a small point set") {
  auto run = desk_quantum("coherent");
  run = parse_config("[state]\nalpha = [0.8, 0.2]\n", run);
  run.sweep.methods = {Method::closed_form, Method::husimi, Method::fock_sum, Method::appendix_ode};
  const auto report = compare_report(run, {{0.0, 0.1, 1e3}, {1e-4, 1e-1, 1e4}}, 2);
  REQUIRE(report.points.size() == 2);
  CHECK(report.passed);
  CHECK(report.vacuum_degeneracy.passed);
  std::ostringstream text;
  write_compare_text(text, report);
  CHECK(text.str().find("PASS") != std::string::npos);
}
