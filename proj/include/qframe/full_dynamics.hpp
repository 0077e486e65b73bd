#ifndef QFRAME_FULL_DYNAMICS_HPP
#define QFRAME_FULL_DYNAMICS_HPP

#include "qframe/core_model.hpp"
#include "qframe/frame_state.hpp"
#include "qframe/gaussian.hpp"
#include "qframe/ode.hpp"
#include "qframe/quantum_analytic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <utility>

namespace qframe {

/// Symmetric potential matrix of the coupled atom-frame system in
/// (x~, X~) coordinates, H = -grad^2 + xi^T V xi / 4.
template <typename Scalar>
struct CouplingMatrix {
  Scalar v11{1}, v12{0}, v22{1};

  [[nodiscard]] Scalar det() const { return v11 * v22 - v12 * v12; }
  [[nodiscard]] Scalar trace() const { return v11 + v22; }
  [[nodiscard]] Eigen::Matrix<Scalar, 2, 2> matrix() const {
    Eigen::Matrix<Scalar, 2, 2> m;
    m << v11, v12, v12, v22;
    return m;
  }
};

/// sin(pi tau / Theta), the envelope of the frame-atom coupling.
template <typename Scalar>
Scalar coupling_envelope(Scalar tau, const DimensionlessParams& p) {
  return std::sin(Scalar(std::numbers::pi) * tau / Scalar(p.dwell_angle));
}

template <typename Scalar>
CouplingMatrix<Scalar> coupling_matrix(Scalar tau, const DimensionlessParams& p) {
  const Scalar s = coupling_envelope(tau, p);
  const Scalar eps = Scalar(p.mass_ratio);
  const Scalar rho = Scalar(p.freq_ratio);
  return {Scalar(1), -std::sqrt(eps) * s, rho * rho + eps * s * s};
}

template <typename Scalar>
struct ModeDecomposition {
  Scalar lambda_plus{1}, lambda_minus{1};
  Eigen::Matrix<Scalar, 2, 2> S = Eigen::Matrix<Scalar, 2, 2>::Identity();  // columns v+, v-
  bool degenerate = false;
};

/// Closed-form symmetric 2x2 eigensolve. S is the rotation by
/// theta = atan2(2 v12, v11 - v22)/2, so its diagonal is positive and S = I
/// whenever v12 = 0 with v11 > v22. Degenerate input returns S = I, flagged.
template <typename Scalar>
ModeDecomposition<Scalar> eigen_decompose(const CouplingMatrix<Scalar>& m) {
  ModeDecomposition<Scalar> out;
  const Scalar half_gap = std::hypot((m.v11 - m.v22) / Scalar(2), m.v12);
  const Scalar mean = m.trace() / Scalar(2);
  if (half_gap == Scalar(0)) {
    out.lambda_plus = out.lambda_minus = mean;
    out.degenerate = true;
    return out;
  }
  out.lambda_plus = mean + half_gap;
  // product form avoids cancellation when lambda_minus << lambda_plus
  out.lambda_minus = m.det() / out.lambda_plus;
  const Scalar theta = std::atan2(Scalar(2) * m.v12, m.v11 - m.v22) / Scalar(2);
  const Scalar c = std::cos(theta), s = std::sin(theta);
  out.S << c, -s, s, c;
  return out;
}

/// First order in epsilon: (1 + eps s^2, rho^2 (1 - eps s^2)).
[[nodiscard]] std::pair<double, double> approx_eigenvalues(double tau,
                                                           const DimensionlessParams& p);

/// Single-mode solution of a' = 4i a^2 - i lambda/4, b' = 4i a b, c' = 2i a + i b^2.
struct ModePropagation {
  GaussianWavepacket1D final_state;
  double lin_phase_unwrapped = 0.0;  // continuous arg b(Theta)
  double max_norm_drift = 0.0;
  OdeStats stats{};
};

[[nodiscard]] ModePropagation propagate_mode_coefficients(
    const DimensionlessParams& p, const std::function<double(double)>& lambda,
    const GaussianWavepacket1D& initial, double ode_tol = 1e-10);

/// Approximate closed-form coefficients at tau (c without
/// normalization). Plus mode: (-1/4, 0, -i tau (1 + eps/4)/2).
[[nodiscard]] GaussianWavepacket1D approx_plus_coefficients(const DimensionlessParams& p,
                                                            double tau);
/// Minus mode from amplitude alpha with rotated frequency Omega' = Omega (1 - eps/4).
[[nodiscard]] GaussianWavepacket1D approx_minus_coefficients(const DimensionlessParams& p,
                                                             std::complex<double> alpha,
                                                             double tau);

enum class EigenvalueModel { exact, first_order };

struct AppendixDiagnostics {
  double kappa_numeric = 0.0;       // rotation angle of the minus-mode amplitude
  std::complex<double> plus_phase;  // log of the atom-mode overlap, relative to free evolution
  std::complex<double> minus_phase; // coherent-state residual phase of the minus mode
  double squeeze_residual = 0.0;    // |a_-(Theta) + rho/4|
  double max_norm_drift = 0.0;
};

struct AppendixResult {
  InterferenceResult result;
  AppendixDiagnostics diagnostics;
};

/// Adiabatic normal-mode pipeline: propagates both modes numerically, reads
/// off the plus-mode phase, the minus-mode rotation and residual phase, and
/// applies them to the frame state through tr(rho e^{i kappa n}).
/// The default first-order eigenvalues match the closed forms' own order;
/// `exact` keeps the O(eps rho^2) eigenvalue terms, which shift the phase by
/// O(eps rho^2 omega T) and track the exact two-mode result instead.
[[nodiscard]] AppendixResult averaged_phase_appendix(
    const FrameState& state, const DimensionlessParams& p, double ode_tol = 1e-10,
    EigenvalueModel model = EigenvalueModel::first_order);

/// Rates of the two-mode coefficient system for psi = exp(xi^T A xi + b^T xi + c)
/// under i psi_tau = (-grad^2 + xi^T V xi / 4) psi:
///   A' = 4i A^2 - i V/4,  b' = 4i A b,  c' = i b^T b + 2i tr A.
struct RiccatiRates {
  Eigen::Matrix2cd dA;
  Eigen::Vector2cd db;
  std::complex<double> dc;
};
[[nodiscard]] RiccatiRates riccati_rates(const GaussianWavepacket2D& psi,
                                         const Eigen::Matrix2d& V);

/// Atom ground state times frame coherent state |alpha>, normalized.
[[nodiscard]] GaussianWavepacket2D initial_product_state(std::complex<double> alpha,
                                                         const DimensionlessParams& p);

/// Exact free evolution of the product state over [0, Theta] with no
/// coupling: atom ground state and frame coherent state alpha e^{-i Omega T}.
[[nodiscard]] GaussianWavepacket2D decoupled_final_state(std::complex<double> alpha,
                                                         const DimensionlessParams& p);

struct Riccati2DOptions {
  OdeOptions ode{};
  double norm_abort = 1e-6;
};

struct Riccati2DResult {
  GaussianWavepacket2D final_state;
  double max_norm_drift = 0.0;
  OdeStats stats{};
};

[[nodiscard]] Riccati2DResult riccati_propagate_2d(std::complex<double> alpha,
                                                   const DimensionlessParams& p,
                                                   double ode_tol = 1e-10);
[[nodiscard]] Riccati2DResult riccati_propagate_2d(const GaussianWavepacket2D& initial,
                                                   const DimensionlessParams& p,
                                                   const Riccati2DOptions& options);

/// Generating function of the reduced frame operator
/// K = <g_atom| U_L^dagger U_R |g_atom>: in the Bargmann representation
/// e^{(|a|^2+|b|^2)/2} <g, b|U_L^dagger U_R|g, a> = exp(k0 + q a^2 + p conj(b)^2 + s a conj(b)).
struct FrameKernel {
  std::complex<double> k0, q, p, s;
  double max_norm_drift = 0.0;

  /// Matrix elements <m|K|n> for m, n <= max_number.
  [[nodiscard]] Eigen::MatrixXcd matrix(unsigned max_number) const;
  /// <alpha|K|alpha>.
  [[nodiscard]] std::complex<double> coherent_expectation(std::complex<double> alpha) const;
};

[[nodiscard]] FrameKernel riccati_frame_kernel(const DimensionlessParams& p,
                                               double ode_tol = 1e-10);

/// tr(rho K) with the kernel from the exact two-mode propagation. Non-coherent
/// states are truncated where their Fock tail drops below `tail`.
[[nodiscard]] InterferenceResult averaged_phase_riccati(const FrameState& state,
                                                        const DimensionlessParams& p,
                                                        double ode_tol = 1e-10,
                                                        double tail = 1e-12);

/// integral dX~ conj(Phi_L) Phi_R at fixed x~, evaluated analytically.
/// Throws NonNormalizableError unless Re(M22) < 0 for M = A_R + conj(A_L).
[[nodiscard]] std::complex<double> interference_from_2d(const GaussianWavepacket2D& right,
                                                        const GaussianWavepacket2D& left,
                                                        double x);

}  // namespace qframe

#endif  // QFRAME_FULL_DYNAMICS_HPP
