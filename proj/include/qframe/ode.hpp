#ifndef QFRAME_ODE_HPP
#define QFRAME_ODE_HPP

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qframe {

/// Adaptive integration failure, carrying the dimensionless time reached.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double tau)
      : std::runtime_error(what + " at tau=" + std::to_string(tau)), tau_(tau) {}
  [[nodiscard]] double tau() const noexcept { return tau_; }

 private:
  double tau_;
};

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-2;
  double min_step = 1e-12;
  std::size_t max_steps = 200'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Complex coefficients packed as interleaved (re, im) pairs.
template <std::size_t ComplexCount>
using PackedState = std::array<double, 2 * ComplexCount>;

template <std::size_t ComplexCount>
inline std::complex<double> unpack(const PackedState<ComplexCount>& s, std::size_t i) {
  return {s[2 * i], s[2 * i + 1]};
}

template <std::size_t ComplexCount>
inline void pack(PackedState<ComplexCount>& s, std::size_t i, std::complex<double> z) {
  s[2 * i] = z.real();
  s[2 * i + 1] = z.imag();
}

/// Embedded Runge-Kutta-Fehlberg 7(8) with step-size control on [t0, t1].
/// `observer(state, t)` runs after every accepted step (and once at t0); it
/// may throw to abort. Throws IntegrationError on step underflow.
template <std::size_t N, class Rhs, class Observer>
OdeStats integrate_adaptive(Rhs&& rhs, std::array<double, N>& state, double t0, double t1,
                            const OdeOptions& options, Observer&& observer) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  auto stepper =
      odeint::make_controlled(options.abs_tol, options.rel_tol,
                              odeint::runge_kutta_fehlberg78<State>());
  auto system = [&rhs](const State& x, State& dxdt, double t) { rhs(x, dxdt, t); };

  OdeStats stats;
  double t = t0;
  double dt = std::min(options.initial_step, t1 - t0);
  observer(static_cast<const State&>(state), t);
  while (t < t1) {
    if (stats.accepted + stats.rejected >= options.max_steps) {
      throw IntegrationError("step budget exhausted", t);
    }
    const bool last = t + dt >= t1;
    if (last) dt = t1 - t;
    const double t_before = t;
    const auto result = stepper.try_step(system, state, t, dt);
    if (result == odeint::success) {
      ++stats.accepted;
      if (last) t = t1;  // land exactly on the endpoint
      observer(static_cast<const State&>(state), t);
    } else {
      ++stats.rejected;
      if (dt < options.min_step * std::max(1.0, std::abs(t_before))) {
        throw IntegrationError("step size underflow (stiff or singular system)", t_before);
      }
    }
  }
  return stats;
}

}  // namespace qframe

#endif  // QFRAME_ODE_HPP
