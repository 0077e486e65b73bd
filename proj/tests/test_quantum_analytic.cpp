#include "qframe/quantum_analytic.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace qframe;
using qframe::test::main_config;
using qframe::test::rel_diff;
using cd = std::complex<double>;

namespace {

const DimensionlessParams desk = DimensionlessParams::from_groups(1e-3, 1e-2, 1e5);

double dist(cd a, cd b) { return std::abs(a - b); }

}  // namespace

// Frozen from 40-digit Fock sums at eps = 1e-3, Omega T = 1e3, omega T = 1e5.
TEST_CASE("closed forms against high-precision Fock sums") {
  CHECK(dist(averaged_phase_closed(CoherentState{{1.2, -0.4}}, desk).factor,
             {0.792090844276405, 0.527162141526624}) < 1e-13);
  CHECK(dist(averaged_phase_closed(SqueezedVacuum{0.8, 0.0}, desk).factor,
             {0.869832603648482, 0.324834860934781}) < 1e-13);
  CHECK(dist(averaged_phase_closed(ThermalState{1.0}, desk).factor,
             {0.919485961618549, 0.316862571724199}) < 1e-13);
  CHECK(dist(averaged_phase_closed(FockState{3}, desk).factor,
             {0.588680620666364, 0.808365713555359}) < 1e-13);
}

TEST_CASE("vacuum limits of all four states coincide") {
  const auto ref = std::polar(1.0, desk.vacuum_phase());
  for (const FrameState& s : {FrameState{CoherentState{{0.0, 0.0}}}, FrameState{FockState{0}},
                              FrameState{SqueezedVacuum{0.0, 0.4}}, FrameState{ThermalState{50.0}}}) {
    const auto r = averaged_phase_closed(s, desk);
    CHECK(dist(r.factor, ref) < 1e-10);
  }
}

TEST_CASE("coherent state of the classical oscillation reproduces the classical phase") {
  const auto c = main_config();
  const auto p = to_dimensionless(c);
  const double chi2 = c.frame_mass * c.frame_freq * c.amplitude * c.amplitude / (2.0 * c.hbar);
  const auto r = averaged_phase_closed(CoherentState{coherent_amplitude(c)}, c);
  const double classical = c.atom_mass * c.frame_freq * c.frame_freq * c.amplitude *
                           c.amplitude * c.dwell_time / (8.0 * c.hbar);
  CHECK(rel_diff(std::norm(coherent_amplitude(c)), chi2) < 1e-13);
  CHECK(std::abs(r.unwrapped_phase - (classical + p.vacuum_phase())) < 1e-9);
  CHECK(std::abs(r.visibility - 1.0) < 1e-10);
}

TEST_CASE("coherent and Fock closed forms are pure phases at linear order") {
  for (double a : {0.0, 0.5, 3.0, 10.0}) {
    const auto r = averaged_phase_closed(CoherentState{{a, 0.0}}, desk, CoherentForm::linearized);
    CHECK(std::abs(r.visibility - 1.0) < 1e-10);
  }
  for (unsigned n : {0u, 1u, 7u, 1000u}) {
    CHECK(std::abs(averaged_phase_closed(FockState{n}, desk).visibility - 1.0) < 1e-10);
  }
}

TEST_CASE("replacing |alpha|^2 by N maps the coherent phase onto the Fock phase") {
  for (unsigned n : {1u, 4u, 25u}) {
    const auto coh = averaged_phase_closed(CoherentState{std::polar(std::sqrt(double(n)), 0.3)},
                                           desk, CoherentForm::linearized);
    const auto fock = averaged_phase_closed(FockState{n}, desk);
    CHECK(dist(coh.factor, fock.factor) < 1e-10);
  }
}

TEST_CASE("thermal Fock sum equals the closed form") {
  const auto ph = BackActionPhases::from(desk);
  for (double y : {0.3, 1.0, 4.0}) {
    const ThermalState s{y};
    const auto fs = averaged_phase_fock_sum(s, ph, truncation_for_tail(s, 1e-16), 1e-15);
    CHECK(dist(fs.result.factor, averaged_phase_closed(s, ph).factor) < 1e-10);
  }
}

TEST_CASE("cold thermal state is the vacuum") {
  const auto ph = BackActionPhases::from(desk);
  const auto fs = averaged_phase_fock_sum(ThermalState{50.0}, ph, 40);
  const auto vac = averaged_phase_fock_sum(FockState{0}, ph, 0);
  CHECK(dist(fs.result.factor, vac.result.factor) < 1e-20 + 1e-15);
  CHECK(fs.tail < 1e-20);
}

TEST_CASE("Fock sum of a number state is a single term") {
  const auto ph = BackActionPhases::from(desk);
  const auto fs = averaged_phase_fock_sum(FockState{5}, ph, 5);
  CHECK(dist(fs.result.factor, averaged_phase_closed(FockState{5}, ph).factor) < 1e-15);
  CHECK(fs.tail == 0.0);
}

TEST_CASE("Fock sum is periodic in kappa") {
  auto ph = BackActionPhases::from(desk);
  const ThermalState s{0.7};
  const unsigned n = truncation_for_tail(s, 1e-14);
  const auto a = averaged_phase_fock_sum(s, ph, n, 1e-13).result.factor;
  ph.kappa += qframe::test::two_pi;
  const auto b = averaged_phase_fock_sum(s, ph, n, 1e-13).result.factor;
  CHECK(dist(a, b) < 1e-12);
}

TEST_CASE("Fock sum refuses a truncation with too much tail") {
  CHECK_THROWS_AS((void)averaged_phase_fock_sum(ThermalState{0.1}, BackActionPhases::from(desk), 5),
                  ConfigError);
}

TEST_CASE("visibility never exceeds one") {
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const BackActionPhases ph{std::pow(10.0, -6.0 + 7.0 * u(rng)), -100.0 * u(rng)};
    const FrameState states[] = {CoherentState{std::polar(20.0 * u(rng), 6.3 * u(rng))},
                                 FockState{static_cast<unsigned>(1000 * u(rng))},
                                 SqueezedVacuum{15.0 * u(rng), u(rng)},
                                 ThermalState{std::pow(10.0, -3.0 + 5.0 * u(rng))}};
    for (const auto& s : states) worst = std::max(worst, averaged_phase_closed(s, ph).visibility);
  }
  CHECK(worst <= 1.0 + 1e-10);
}

TEST_CASE("squeezed closed form survives huge r") {
  const auto r = averaged_phase_closed(SqueezedVacuum{400.0, 0.0}, desk);
  CHECK(std::isfinite(r.visibility));
  CHECK(r.visibility < 1e-100);
}

TEST_CASE("visibility is monotone in squeezing and temperature") {
  const auto ph = BackActionPhases::from(DimensionlessParams::from_groups(1e-4, 1e-2, 1e5));
  double prev = 2.0;
  for (double r = 0.0; r <= 6.0; r += 0.05) {
    const double v = averaged_phase_closed(SqueezedVacuum{r, 0.0}, ph).visibility;
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  prev = 2.0;
  for (double y = 50.0; y >= 1e-3; y *= 0.8) {
    const double v = averaged_phase_closed(ThermalState{y}, ph).visibility;
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
}

TEST_CASE("linearized squeezed visibility at the suppression threshold") {
  const BackActionPhases ph{0.025, 0.0};
  const double r = std::asinh(std::sqrt(1.0 / ph.kappa));
  const auto z = squeezed_published_form(r, ph, SqueezedForm::linearized);
  CHECK(std::abs(std::abs(z) - std::pow(2.0, -0.25)) < 1e-12);
}

TEST_CASE("thermal visibility at matched temperature") {
  const auto p = DimensionlessParams::from_groups(1e-4, 1e-2, 1e5);
  const double y = p.back_action;  // beta hbar Omega / 2 = kappa / 2
  const auto r = averaged_phase_closed(ThermalState{y}, p);
  CHECK(std::abs(r.visibility - 1.0 / std::sqrt(2.0)) < 1e-3);
}

TEST_CASE("Husimi integral reproduces the closed forms") {
  const auto ph = BackActionPhases::from(DimensionlessParams::from_groups(1e-3, 1e-2, 1e5));
  for (const FrameState& s : {FrameState{CoherentState{{1.2, -0.4}}}, FrameState{FockState{0}},
                              FrameState{FockState{3}}, FrameState{SqueezedVacuum{0.8, 0.5}},
                              FrameState{ThermalState{1.0}}}) {
    const auto closed = averaged_phase_closed(s, ph).factor;
    const auto husimi = averaged_phase_husimi(s, ph);
    CHECK(dist(husimi.factor, closed) < 1e-6);
    CHECK(husimi.method == InterferenceMethod::husimi_integral);
  }
}

TEST_CASE("Husimi integral of the vacuum") {
  const auto ph = BackActionPhases::from(desk);
  CHECK(dist(averaged_phase_husimi(FockState{0}, ph).factor, std::polar(1.0, ph.vacuum_phase)) <
        1e-8);
}

TEST_CASE("Husimi integral of a truncated thermal density matrix") {
  const auto ph = BackActionPhases::from(desk);
  const auto rho = thermal_density_matrix(1.0, 1e-12);
  const auto husimi = averaged_phase_husimi(rho, ph);
  CHECK(dist(husimi.factor, averaged_phase_closed(ThermalState{1.0}, ph).factor) < 1e-6);
}

TEST_CASE("Husimi integral of a large coherent amplitude") {
  // |alpha|^2 = 3e9 with kappa small enough that |alpha|^2 kappa^2 stays O(1e-3)
  const auto p = DimensionlessParams::from_groups(4e-9, 1e-2, 1e5);
  const auto ph = BackActionPhases::from(p);
  const CoherentState s{{std::sqrt(3e9), 0.0}};
  const auto closed = averaged_phase_closed(s, ph).factor;
  CHECK(dist(averaged_phase_husimi(s, ph).factor, closed) / std::abs(closed) < 1e-6);
}

TEST_CASE("closed form rejects density matrices") {
  CHECK_THROWS_AS((void)averaged_phase_closed(thermal_density_matrix(2.0), desk), ConfigError);
}

TEST_CASE("unwrapped phase follows the reference branch") {
  const auto r = make_interference_result(std::polar(0.5, 0.1), 4.0 * std::numbers::pi,
                                          InterferenceMethod::closed_form);
  CHECK(r.phase == doctest::Approx(0.1));
  CHECK(r.unwrapped_phase == doctest::Approx(0.1 + 4.0 * std::numbers::pi));
  CHECK(r.visibility == doctest::Approx(0.5));
}

TEST_CASE("squeeze threshold of the main preset") {
  const auto t = squeeze_threshold(main_config());
  CHECK(t.ratio == doctest::Approx(6.366e9).epsilon(1e-3));
  CHECK(std::abs(t.r_exact - 12.0) < 0.1);
  CHECK(std::abs(t.r_large_r_estimate - t.r_exact) < 1e-9);
  CHECK(std::sinh(t.r_exact) * std::sinh(t.r_exact) == doctest::Approx(t.ratio).epsilon(1e-12));
}

TEST_CASE("dephasing threshold quantities") {
  const auto c = main_config();
  const auto sq = dephasing_threshold(SqueezedVacuum{2.0, 0.0}, c);
  CHECK(sq.dephasing_time * sq.atom_energy_uncertainty == doctest::Approx(c.hbar).epsilon(1e-14));
  CHECK(sq.frame_energy_uncertainty ==
        doctest::Approx(c.hbar * c.frame_freq * std::sinh(4.0) / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sq.suppression_lhs == doctest::Approx(std::sinh(2.0) * std::sinh(2.0)));
  CHECK(sq.suppression_rhs == doctest::Approx(1.0 / to_dimensionless(c).back_action));

  const auto cold = dephasing_threshold(ThermalState{800.0}, c);
  CHECK(cold.exact_frame_energy_uncertainty < 1e-100);
  const auto hot = dephasing_threshold(ThermalState{1e-3}, c);
  CHECK(hot.dephasing_time * hot.atom_energy_uncertainty == doctest::Approx(c.hbar).epsilon(1e-14));
  CHECK_THROWS_AS((void)dephasing_threshold(FockState{1}, c), ConfigError);
}
