#include "qframe/classical_frame.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qframe {

ClassicalPhaseResult classical_phase(const PhysicalConfig& config, RegimePolicy policy) {
  config.validate();
  require_regime(validate_regime(config), policy, "classical_phase");
  const double W = config.frame_freq;
  const double X0 = config.amplitude;
  const double phase =
      config.atom_mass * W * W * X0 * X0 * config.dwell_time / (8.0 * config.hbar);
  return {phase, 1.0, ClassicalMethod::closed_form};
}

double gravitational_phase(double mass, double g_component, double enclosed_area,
                           double velocity, double hbar) {
  if (!std::isfinite(mass) || !std::isfinite(g_component) || !std::isfinite(enclosed_area) ||
      !std::isfinite(velocity)) {
    throw ConfigError("gravitational_phase: inputs must be finite");
  }
  if (!(velocity > 0.0)) throw ConfigError("gravitational_phase: velocity must be positive");
  return mass * g_component * enclosed_area / (hbar * velocity);
}

ClassicalPropagation classical_gaussian_propagate(const PhysicalConfig& config, double ode_tol,
                                                  RegimePolicy policy,
                                                  std::size_t trajectory_samples) {
  config.validate();
  require_regime(validate_regime(config), policy, "classical_gaussian_propagate");
  if (!(ode_tol > 0.0)) throw ConfigError("ode_tol must be positive");

  const DimensionlessParams p = to_dimensionless(config);
  const double theta = p.dwell_angle;
  const double rho = p.freq_ratio;
  const double phi0 = config.initial_phase;
  const double drive = config.amplitude / config.atom_zero_point();
  const double envelope_rate = std::numbers::pi / theta;

  Propagation1DOptions opts;
  opts.ode.abs_tol = ode_tol;
  opts.ode.rel_tol = ode_tol;
  opts.trajectory_samples = trajectory_samples;

  const auto ground = oscillator_ground_state();
  auto trajectory = propagate_gaussian_1d(
      ground, [](double) { return 1.0; },
      [=](double tau) {
        return drive * std::sin(envelope_rate * tau) * std::cos(rho * tau + phi0);
      },
      0.0, theta, opts);

  const auto& right = trajectory.final_state();
  auto left = ground;
  left.scalar += std::complex<double>(0.0, -theta / 2.0);

  ClassicalPhaseResult result;
  result.method = ClassicalMethod::gaussian_ode;
  result.phase = right.c().imag() - ground.c().imag() + theta / 2.0;
  result.visibility = std::min(1.0, std::abs(overlap(left, right)));
  return {std::move(trajectory), result};
}

double proper_time_phase(const PhysicalConfig& config, std::size_t quadrature_points) {
  config.validate();
  const double drive_angle = config.frame_freq * config.dwell_time;
  const double periods = drive_angle / (2.0 * std::numbers::pi);
  if (static_cast<double>(quadrature_points) <
      static_cast<double>(min_points_per_drive_period) * std::max(periods, 1.0)) {
    throw std::invalid_argument("proper_time_phase: fewer than 20 points per drive period");
  }
  constexpr unsigned panel_nodes = 10;
  using Rule = boost::math::quadrature::gauss<double, panel_nodes>;
  const std::size_t panels = (quadrature_points + panel_nodes - 1) / panel_nodes;

  const double c = config.light_speed;
  const double vmax = config.amplitude * config.frame_freq;
  const double phi0 = config.initial_phase;
  // v_R(u)^2 / (2 c^2) with u = t/T; the left path is at rest in the lab.
  auto deficit_rate = [&](double u) {
    const double v = -vmax * std::sin(std::numbers::pi * u) * std::sin(drive_angle * u + phi0);
    return v * v / (2.0 * c * c);
  };
  double deficit = 0.0;  // integral of (1 - dtau_R/dt) dt over [0, T], divided by T
  const double width = 1.0 / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = width * static_cast<double>(k);
    deficit += Rule::integrate(deficit_rate, lo, lo + width);
  }
  const double elapsed_difference = -deficit * config.dwell_time;  // tau_R - tau_L
  return -(config.atom_mass * c * c / config.hbar) * elapsed_difference;
}

std::complex<double> interference_density(double x, const PhysicalConfig& config) {
  const double phase = classical_phase(config, RegimePolicy::allow).phase;
  const double mw_h = config.atom_mass * config.trap_freq / config.hbar;
  return std::sqrt(mw_h / std::numbers::pi) * std::exp(-mw_h * x * x) *
         std::polar(1.0, phase);
}

}  // namespace qframe
