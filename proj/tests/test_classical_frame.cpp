#include "qframe/classical_frame.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace qframe;
using qframe::test::main_config;
using qframe::test::rel_diff;

namespace {

double formula(const PhysicalConfig& c) {
  return c.atom_mass * c.frame_freq * c.frame_freq * c.amplitude * c.amplitude * c.dwell_time /
         (8.0 * c.hbar);
}

PhysicalConfig with_amplitude(PhysicalConfig c, double x0) {
  c.amplitude = x0;
  return c.resolved();
}

// rho = 1e-2, pi/(Omega T) = 1e-3 with a frame large enough that the
// classical picture holds.
PhysicalConfig desk_classical(double trap_scale = 1.0) {
  PhysicalConfig c;
  c.atom_mass = 1e-27;
  c.frame_mass = 1e-15;
  c.frame_freq = qframe::test::two_pi * 1e8;
  c.trap_freq = c.frame_freq / 1e-2 * trap_scale;
  c.dwell_time = 1000.0 * std::numbers::pi / c.frame_freq;
  c.amplitude = 1e-9;
  return c.resolved();
}

}  // namespace

TEST_CASE("headline phase of the main preset") {
  const auto c = main_config();
  const auto r = classical_phase(c);
  CHECK(std::abs(r.phase - formula(c)) < 1e-12);
  CHECK(r.phase == doctest::Approx(0.4679436830184775).epsilon(1e-14));
  CHECK(r.visibility == 1.0);
  CHECK(r.method == ClassicalMethod::closed_form);
}

TEST_CASE("closed-form scaling laws") {
  const auto c = main_config();
  CHECK(classical_phase(with_amplitude(c, 0.0)).phase == 0.0);
  const double base = classical_phase(c).phase;
  CHECK(rel_diff(classical_phase(with_amplitude(c, 2e-9)).phase, 4.0 * base) < 1e-15);

  auto heavy = c;
  heavy.atom_mass *= 3.0;
  CHECK(rel_diff(classical_phase(heavy.resolved()).phase, 3.0 * base) < 1e-15);

  auto longer = c;
  longer.wire_length *= 2.0;
  longer.dwell_time = 0.0;
  CHECK(rel_diff(classical_phase(longer.resolved()).phase, 2.0 * base) < 1e-15);

  auto fast = c;
  fast.frame_freq *= 2.0;
  CHECK(rel_diff(classical_phase(fast.resolved()).phase, 4.0 * base) < 1e-15);
}

TEST_CASE("closed form ignores phi0 and omega") {
  auto c = main_config();
  const double base = classical_phase(c).phase;
  c.initial_phase = 1.3;
  c.trap_freq *= 5.0;
  CHECK(classical_phase(c.resolved()).phase == base);
}

TEST_CASE("classical phase enforces the regime unless allowed") {
  auto c = main_config();
  c.trap_freq = c.frame_freq;
  c = c.resolved();
  CHECK_THROWS_AS((void)classical_phase(c), RegimeError);
  CHECK_NOTHROW((void)classical_phase(c, RegimePolicy::allow));
}

TEST_CASE("gravitational phase") {
  CHECK(gravitational_phase(1.675e-27, 9.8, 0.0, 2000.0) == 0.0);
  const double phi = gravitational_phase(1.675e-27, 9.8, 1e-3, 2000.0);
  CHECK(phi == doctest::Approx(1.675e-27 * 9.8 * 1e-3 / (constants::hbar * 2000.0)));
  CHECK(phi == doctest::Approx(77.83).epsilon(1e-3));
  CHECK(gravitational_phase(1.675e-27, 9.8, 2e-3, 2000.0) / phi == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)gravitational_phase(1.0, 1.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("undriven Gaussian propagation stays in the ground state") {
  const auto c = with_amplitude(main_config(), 0.0);
  const auto prop = classical_gaussian_propagate(c, 1e-10);
  CHECK(std::abs(prop.result.phase) < 1e-9);
  CHECK(std::abs(prop.result.visibility - 1.0) < 1e-9);
  for (const auto& s : prop.trajectory.states) CHECK(std::abs(s.a() + 0.25) < 1e-10);
  CHECK(prop.trajectory.max_norm_drift < 1e-8);
}

TEST_CASE("Gaussian oracle reproduces the closed form on the main preset") {
  const auto c = main_config();
  const auto prop = classical_gaussian_propagate(c, 1e-10);
  const double closed = classical_phase(c).phase;
  const auto p = to_dimensionless(c);
  const double budget = std::max(p.freq_ratio, std::numbers::pi / p.drive_angle);
  CHECK(rel_diff(prop.result.phase, closed) <= budget);
  CHECK(prop.trajectory.max_norm_drift < 1e-6);
  CHECK(prop.result.visibility <= 1.0 + 1e-10);
  CHECK(prop.result.method == ClassicalMethod::gaussian_ode);
}

TEST_CASE("Gaussian oracle phase is insensitive to omega") {
  const auto a = classical_gaussian_propagate(desk_classical(1.0), 1e-10).result.phase;
  const auto b = classical_gaussian_propagate(desk_classical(10.0), 1e-10).result.phase;
  CHECK(rel_diff(a, b) < 1e-2);
}

TEST_CASE("proper-time phase matches the closed form") {
  const auto c = main_config();
  const auto p = to_dimensionless(c);
  const double closed = classical_phase(c).phase;
  const double pt = proper_time_phase(c, 64 * 100);
  CHECK(rel_diff(pt, closed) <= std::numbers::pi / p.drive_angle);
  CHECK(proper_time_phase(with_amplitude(c, 0.0), 6400) == 0.0);
}

TEST_CASE("proper-time phase depends on phi0 only at order pi/(Omega T)") {
  auto c = main_config();
  const auto p = to_dimensionless(c);
  const double ref = proper_time_phase(c, 6400);
  double worst = 0.0;
  for (int k = 1; k < 16; ++k) {
    c.initial_phase = qframe::test::two_pi * k / 16.0;
    worst = std::max(worst, rel_diff(proper_time_phase(c.resolved(), 6400), ref));
  }
  CHECK(worst <= 2.0 * std::numbers::pi / p.drive_angle);
}

TEST_CASE("proper-time agreement improves with Omega T") {
  auto deviation = [](double omega_T) {
    PhysicalConfig c = main_config();
    c.wire_length = 0.0;
    c.dwell_time = omega_T / c.frame_freq;
    c.initial_phase = 0.4;
    c = c.resolved();
    const auto pts = static_cast<std::size_t>(64.0 * std::ceil(omega_T / qframe::test::two_pi) + 640);
    return rel_diff(proper_time_phase(c, pts), classical_phase(c, RegimePolicy::allow).phase);
  };
  const double d2 = deviation(1e2), d3 = deviation(1e3), d4 = deviation(1e4);
  CHECK(d3 <= d2 / 5.0);
  CHECK(d4 <= d3 / 5.0);
}

TEST_CASE("proper-time quadrature needs 20 points per drive period") {
  const auto c = main_config();
  CHECK_THROWS((void)proper_time_phase(c, 100));
}

TEST_CASE("interference density") {
  const auto c = main_config();
  const double peak = std::sqrt(c.atom_mass * c.trap_freq / (std::numbers::pi * c.hbar));
  const auto z0 = interference_density(0.0, c);
  CHECK(rel_diff(std::abs(z0), peak) < 1e-14);
  const double phi = classical_phase(c).phase;
  const double xz = std::sqrt(c.hbar / (c.atom_mass * c.trap_freq));
  for (double x : {0.3, -1.1, 2.0}) {
    CHECK(std::abs(std::arg(interference_density(x * xz, c)) - phi) < 1e-14);
  }
  // modulus integrates to 1: trapezoid on a fine symmetric grid
  const int n = 4000;
  const double lim = 10.0 * xz, h = 2.0 * lim / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    sum += w * std::abs(interference_density(-lim + i * h, c));
  }
  CHECK(std::abs(sum * h - 1.0) < 1e-10);
}
