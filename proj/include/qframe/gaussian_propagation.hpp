#ifndef QFRAME_GAUSSIAN_PROPAGATION_HPP
#define QFRAME_GAUSSIAN_PROPAGATION_HPP

#include "qframe/gaussian.hpp"
#include "qframe/ode.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace qframe {

struct Propagation1DOptions {
  OdeOptions ode{};
  double norm_abort = 1e-6;        // relative norm drift that aborts the run
  std::size_t trajectory_samples = 256;
};

/// Decimated record of a single-mode Gaussian propagation.
struct Trajectory1D {
  std::vector<double> tau;
  std::vector<GaussianWavepacket1D> states;
  double max_norm_drift = 0.0;
  /// arg(b) followed continuously across accepted steps (meaningful when
  /// b stays away from zero).
  double lin_phase_unwrapped = 0.0;
  OdeStats stats{};

  [[nodiscard]] const GaussianWavepacket1D& final_state() const { return states.back(); }
};

/// Right-hand side of the coefficient equations for
///   i d/dtau psi = [-d^2/dxi^2 + lambda (xi - d)^2 / 4] psi,
/// psi = exp(a xi^2 + b xi + c):
///   a' = 4i a^2 - i lambda/4,  b' = 4i a b + i lambda d/2,  c' = 2i a + i b^2 - i lambda d^2/4.
struct GaussianCoefficientRates {
  std::complex<double> da, db, dc;
};

inline GaussianCoefficientRates gaussian_rates(std::complex<double> a, std::complex<double> b,
                                               double lambda, double shift) {
  constexpr std::complex<double> I{0.0, 1.0};
  return {4.0 * I * a * a - I * lambda / 4.0,
          4.0 * I * a * b + I * lambda * shift / 2.0,
          2.0 * I * a + I * b * b - I * lambda * shift * shift / 4.0};
}

/// Integrates the single-mode coefficient system from tau0 to tau1. `lambda`
/// and `shift` are callables of tau evaluated inside the integrator.
template <class Lambda, class Shift>
Trajectory1D propagate_gaussian_1d(const GaussianWavepacket1D& initial, Lambda&& lambda,
                                   Shift&& shift, double tau0, double tau1,
                                   const Propagation1DOptions& options) {
  using State = PackedState<3>;
  State x{};
  pack<3>(x, 0, initial.a());
  pack<3>(x, 1, initial.b());
  pack<3>(x, 2, initial.c());

  auto rhs = [&](const State& s, State& ds, double tau) {
    const auto r = gaussian_rates(unpack<3>(s, 0), unpack<3>(s, 1), lambda(tau), shift(tau));
    pack<3>(ds, 0, r.da);
    pack<3>(ds, 1, r.db);
    pack<3>(ds, 2, r.dc);
  };

  auto to_packet = [](const State& s) {
    return GaussianWavepacket1D::from_coefficients(unpack<3>(s, 0), unpack<3>(s, 1),
                                                   unpack<3>(s, 2));
  };

  Trajectory1D out;
  const double log_norm0 = log_norm_squared(initial);
  const double sample_dt =
      (tau1 - tau0) / static_cast<double>(std::max<std::size_t>(options.trajectory_samples, 1));
  double next_sample = tau0;
  double last_arg = std::arg(initial.b());
  out.lin_phase_unwrapped = last_arg;

  auto observer = [&](const State& s, double tau) {
    const auto psi = to_packet(s);
    if (!(psi.a().real() < 0.0)) {
      throw IntegrationError("wavepacket lost normalizability", tau);
    }
    const double drift = std::abs(std::expm1(log_norm_squared(psi) - log_norm0));
    out.max_norm_drift = std::max(out.max_norm_drift, drift);
    if (drift > options.norm_abort) throw IntegrationError("norm drift exceeded", tau);
    if (std::abs(psi.b()) > 1e-300) {
      const double arg = std::arg(psi.b());
      out.lin_phase_unwrapped += std::remainder(arg - last_arg, 2.0 * std::numbers::pi);
      last_arg = arg;
    }
    if (tau >= next_sample || tau >= tau1) {
      out.tau.push_back(tau);
      out.states.push_back(psi);
      next_sample += sample_dt;
    }
  };

  out.stats = integrate_adaptive(rhs, x, tau0, tau1, options.ode, observer);
  if (out.tau.empty() || out.tau.back() != tau1) {
    out.tau.push_back(tau1);
    out.states.push_back(to_packet(x));
  }
  return out;
}

}  // namespace qframe

#endif  // QFRAME_GAUSSIAN_PROPAGATION_HPP
