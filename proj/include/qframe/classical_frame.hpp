#ifndef QFRAME_CLASSICAL_FRAME_HPP
#define QFRAME_CLASSICAL_FRAME_HPP

#include "qframe/core_model.hpp"
#include "qframe/gaussian_propagation.hpp"

#include <complex>
#include <cstddef>

namespace qframe {

enum class ClassicalMethod { closed_form, gaussian_ode, proper_time };

struct ClassicalPhaseResult {
  double phase = 0.0;       // right minus left [rad]
  double visibility = 1.0;  // in [0, 1]
  ClassicalMethod method = ClassicalMethod::closed_form;
};

/// Leading-order phase m Omega^2 X0^2 T / (8 hbar) of an atom bound to a
/// classically vibrating frame. Independent of phi0 and omega.
[[nodiscard]] ClassicalPhaseResult classical_phase(const PhysicalConfig& config,
                                                   RegimePolicy policy = RegimePolicy::enforce);

/// m g A / (hbar v) for a uniform field component g across enclosed area A.
[[nodiscard]] double gravitational_phase(double mass, double g_component, double enclosed_area,
                                         double velocity, double hbar = constants::hbar);

struct ClassicalPropagation {
  Trajectory1D trajectory;  // in x~ = x / x_zp, tau = omega t
  ClassicalPhaseResult result;
};

/// Solves the driven-trap Schroedinger equation for the right path with a
/// Gaussian ansatz, starting from the transverse ground state. The full
/// envelope X0 sin(pi t/T) cos(Omega t + phi0) drives the trap centre. The
/// phase is Im c(omega T) measured against the free left-path phase -omega T/2;
/// visibility is |<psi_L(T)|psi_R(T)>|.
[[nodiscard]] ClassicalPropagation classical_gaussian_propagate(
    const PhysicalConfig& config, double ode_tol = 1e-10,
    RegimePolicy policy = RegimePolicy::enforce, std::size_t trajectory_samples = 256);

inline constexpr std::size_t min_points_per_drive_period = 20;

/// Phase from the elapsed proper-time difference, -(m c^2/hbar)(tau_R - tau_L),
/// with d(tau) = (1 - v^2 / 2c^2) dt and v_R = -X0 Omega sin(pi t/T) sin(Omega t + phi0).
/// Composite 10-point Gauss-Legendre; requires at least 20 points per drive period.
[[nodiscard]] double proper_time_phase(const PhysicalConfig& config,
                                       std::size_t quadrature_points);

/// psi_L^*(x,T) psi_R(x,T) = sqrt(m omega / pi hbar) exp(-m omega x^2/hbar + i phi), x in meters.
[[nodiscard]] std::complex<double> interference_density(double x, const PhysicalConfig& config);

}  // namespace qframe

#endif  // QFRAME_CLASSICAL_FRAME_HPP
