#ifndef QFRAME_TEST_SUPPORT_HPP
#define QFRAME_TEST_SUPPORT_HPP

#include "qframe/core_model.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace qframe::test {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// m = 1e-27 kg, M = 1e-15 kg, Omega = 2 pi 1e8, omega = 2 pi 1e10, X0 = 1 nm,
/// L = 1 um at v = 1 m/s.
inline PhysicalConfig main_config() {
  PhysicalConfig c;
  c.atom_mass = 1e-27;
  c.frame_mass = 1e-15;
  c.frame_freq = two_pi * 1e8;
  c.trap_freq = two_pi * 1e10;
  c.amplitude = 1e-9;
  c.wire_length = 1e-6;
  c.traversal_velocity = 1.0;
  return c.resolved();
}

/// SI config realizing the dimensionless groups (epsilon, rho, omega T).
inline PhysicalConfig config_from_groups(double epsilon, double rho, double omega_T,
                                         double amplitude = 0.0) {
  PhysicalConfig c;
  c.atom_mass = 1e-27;
  c.frame_mass = c.atom_mass / epsilon;
  c.frame_freq = two_pi * 1e8;
  c.trap_freq = c.frame_freq / rho;
  c.dwell_time = omega_T / c.trap_freq;
  c.amplitude = amplitude;
  return c.resolved();
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace qframe::test

#endif  // QFRAME_TEST_SUPPORT_HPP
