#include "qframe/full_dynamics.hpp"

#include "qframe/gaussian_propagation.hpp"

#include <algorithm>
#include <cmath>

namespace qframe {

namespace {

using Complex = std::complex<double>;
constexpr Complex I{0.0, 1.0};

double log_norm_constant(double rho) {
  // atom ground state times frame vacuum, both in atom-scaled units
  return 0.25 * std::log(1.0 / (2.0 * std::numbers::pi)) +
         0.25 * std::log(rho / (2.0 * std::numbers::pi));
}

double unwrap_reference(const FrameState& state, const DimensionlessParams& p) {
  if (std::holds_alternative<DensityMatrix>(state)) {
    return p.vacuum_phase() + p.back_action * mean_occupation(state);
  }
  return averaged_phase_closed(state, p).unwrapped_phase;
}

OdeOptions ode_options(double tol) {
  if (!(tol > 0.0)) throw ConfigError("ode_tol must be positive");
  OdeOptions o;
  o.abs_tol = tol;
  o.rel_tol = tol;
  return o;
}

}  // namespace

std::pair<double, double> approx_eigenvalues(double tau, const DimensionlessParams& p) {
  const double s = coupling_envelope(tau, p);
  const double es2 = p.mass_ratio * s * s;
  return {1.0 + es2, p.freq_ratio * p.freq_ratio * (1.0 - es2)};
}

ModePropagation propagate_mode_coefficients(const DimensionlessParams& p,
                                            const std::function<double(double)>& lambda,
                                            const GaussianWavepacket1D& initial, double ode_tol) {
  p.validate();
  Propagation1DOptions opts;
  opts.ode = ode_options(ode_tol);
  opts.trajectory_samples = 1;
  auto traj = propagate_gaussian_1d(
      initial, lambda, [](double) { return 0.0; }, 0.0, p.dwell_angle, opts);
  ModePropagation out;
  out.final_state = traj.final_state();
  out.lin_phase_unwrapped = traj.lin_phase_unwrapped;
  out.max_norm_drift = traj.max_norm_drift;
  out.stats = traj.stats;
  return out;
}

GaussianWavepacket1D approx_plus_coefficients(const DimensionlessParams& p, double tau) {
  return GaussianWavepacket1D::from_coefficients(-0.25, 0.0,
                                                 -I * tau * (1.0 + p.mass_ratio / 4.0) / 2.0);
}

GaussianWavepacket1D approx_minus_coefficients(const DimensionlessParams& p, Complex alpha,
                                               double tau) {
  const double rho = p.freq_ratio;
  const double w = rho * (1.0 - p.mass_ratio / 4.0) * tau;  // Omega' t
  const Complex b = alpha * std::sqrt(rho) * std::polar(1.0, -w);
  const Complex c = -I * w / 2.0 + alpha * alpha / 2.0 * (1.0 - std::polar(1.0, -2.0 * w)) -
                    alpha * alpha.real();
  return GaussianWavepacket1D::from_coefficients(-rho / 4.0, b, c);
}

AppendixResult averaged_phase_appendix(const FrameState& state, const DimensionlessParams& p,
                                       double ode_tol, EigenvalueModel model) {
  p.validate();
  auto eigen = [&p, model](double tau) -> std::pair<double, double> {
    if (model == EigenvalueModel::first_order) return approx_eigenvalues(tau, p);
    const auto d = eigen_decompose(coupling_matrix(tau, p));
    return {d.lambda_plus, d.lambda_minus};
  };
  const double rho = p.freq_ratio;
  const double theta = p.dwell_angle;

  const auto ground = oscillator_ground_state();
  const auto plus = propagate_mode_coefficients(
      p, [&](double tau) { return eigen(tau).first; }, ground, ode_tol);

  // unit amplitude; c excludes the normalization so it reads directly as -beta Re(beta)
  const auto minus_init = GaussianWavepacket1D::from_coefficients(-rho / 4.0, std::sqrt(rho), -1.0);
  const auto minus = propagate_mode_coefficients(
      p, [&](double tau) { return eigen(tau).second; }, minus_init, ode_tol);

  AppendixDiagnostics diag;
  const Complex beta = minus.final_state.b() / std::sqrt(rho);
  diag.kappa_numeric = minus.lin_phase_unwrapped + p.drive_angle;
  diag.plus_phase = log_overlap(ground, plus.final_state) + I * theta / 2.0;
  diag.minus_phase = minus.final_state.c() + beta * beta.real();
  diag.squeeze_residual = std::abs(minus.final_state.a() + rho / 4.0);
  diag.max_norm_drift = std::max(plus.max_norm_drift, minus.max_norm_drift);

  const Complex total = diag.plus_phase + diag.minus_phase + I * p.drive_angle / 2.0;
  const BackActionPhases phases{diag.kappa_numeric, total.imag()};
  InterferenceResult base;
  if (const auto* dm = std::get_if<DensityMatrix>(&state)) {
    base = averaged_phase_fock_sum(state, phases, static_cast<unsigned>(dm->dimension() - 1), 1.0)
               .result;
  } else {
    base = averaged_phase_closed(state, phases);
  }
  InterferenceResult r = base;
  r.factor = std::exp(total.real()) * base.factor;
  r.visibility = std::abs(r.factor);
  r.method = InterferenceMethod::appendix_ode;
  return {r, diag};
}

RiccatiRates riccati_rates(const GaussianWavepacket2D& psi, const Eigen::Matrix2d& V) {
  const Eigen::Matrix2cd& A = psi.quad;
  const Eigen::Vector2cd& b = psi.lin;
  RiccatiRates r;
  r.dA = 4.0 * I * (A * A) - (I / 4.0) * V.cast<Complex>();
  r.db = 4.0 * I * (A * b);
  r.dc = I * (b.transpose() * b)(0, 0) + 2.0 * I * A.trace();
  return r;
}

GaussianWavepacket2D initial_product_state(Complex alpha, const DimensionlessParams& p) {
  const double rho = p.freq_ratio;
  GaussianWavepacket2D g;
  g.quad(0, 0) = -0.25;
  g.quad(1, 1) = -rho / 4.0;
  g.lin(1) = alpha * std::sqrt(rho);
  g.scalar = -alpha * alpha.real() + log_norm_constant(rho);
  return g;
}

GaussianWavepacket2D decoupled_final_state(Complex alpha, const DimensionlessParams& p) {
  const Complex rotated = alpha * std::polar(1.0, -p.drive_angle);
  auto g = initial_product_state(rotated, p);
  g.scalar += -I * (p.dwell_angle + p.drive_angle) / 2.0;
  return g;
}

Riccati2DResult riccati_propagate_2d(Complex alpha, const DimensionlessParams& p, double ode_tol) {
  Riccati2DOptions opts;
  opts.ode = ode_options(ode_tol);
  return riccati_propagate_2d(initial_product_state(alpha, p), p, opts);
}

Riccati2DResult riccati_propagate_2d(const GaussianWavepacket2D& initial,
                                     const DimensionlessParams& p,
                                     const Riccati2DOptions& options) {
  p.validate();
  using State = PackedState<6>;
  // The scalar is carried relative to the uncoupled zero-point phase
  // -i (1 + rho) tau / 2 so that error control sees only the interaction part.
  const Complex free_rate = -I * (1.0 + p.freq_ratio) / 2.0;
  auto to_packet = [free_rate](const State& s, double tau) {
    GaussianWavepacket2D g;
    g.quad << unpack<6>(s, 0), unpack<6>(s, 1), unpack<6>(s, 1), unpack<6>(s, 2);
    g.lin << unpack<6>(s, 3), unpack<6>(s, 4);
    g.scalar = unpack<6>(s, 5) + free_rate * tau;
    return g;
  };

  State x{};
  pack<6>(x, 0, initial.quad(0, 0));
  pack<6>(x, 1, initial.quad(0, 1));
  pack<6>(x, 2, initial.quad(1, 1));
  pack<6>(x, 3, initial.lin(0));
  pack<6>(x, 4, initial.lin(1));
  pack<6>(x, 5, initial.scalar);

  auto rhs = [&](const State& s, State& ds, double tau) {
    const auto r = riccati_rates(to_packet(s, tau), coupling_matrix(tau, p).matrix());
    pack<6>(ds, 0, r.dA(0, 0));
    pack<6>(ds, 1, r.dA(0, 1));
    pack<6>(ds, 2, r.dA(1, 1));
    pack<6>(ds, 3, r.db(0));
    pack<6>(ds, 4, r.db(1));
    pack<6>(ds, 5, r.dc - free_rate);
  };

  Riccati2DResult out;
  const double log_norm0 = log_norm_squared(initial);
  auto observer = [&](const State& s, double tau) {
    const auto g = to_packet(s, tau);
    if (!is_normalizable(g)) throw IntegrationError("wavepacket lost normalizability", tau);
    const double drift = std::abs(std::expm1(log_norm_squared(g) - log_norm0));
    out.max_norm_drift = std::max(out.max_norm_drift, drift);
    if (drift > options.norm_abort) throw IntegrationError("norm drift exceeded", tau);
  };
  out.stats = integrate_adaptive(rhs, x, 0.0, p.dwell_angle, options.ode, observer);
  out.final_state = to_packet(x, p.dwell_angle);
  return out;
}

Eigen::MatrixXcd FrameKernel::matrix(unsigned max_number) const {
  const Eigen::Index dim = max_number + 1;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  g(0, 0) = 1.0;
  for (Eigen::Index n = 1; n + 1 < dim; ++n) {
    g(0, n + 1) = 2.0 * q * g(0, n - 1) * std::sqrt(double(n) / double(n + 1));
  }
  for (Eigen::Index m = 0; m + 1 < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      Complex v = 0.0;
      if (m >= 1) v += 2.0 * p * g(m - 1, n) * std::sqrt(double(m) / double(m + 1));
      if (n >= 1) v += s * g(m, n - 1) * std::sqrt(double(n) / double(m + 1));
      g(m + 1, n) = v;
    }
  }
  return std::exp(k0) * g;
}

Complex FrameKernel::coherent_expectation(Complex alpha) const {
  return std::exp(k0 + (s - 1.0) * std::norm(alpha) + q * alpha * alpha +
                  p * std::conj(alpha) * std::conj(alpha));
}

FrameKernel riccati_frame_kernel(const DimensionlessParams& p, double ode_tol) {
  const auto zero = riccati_propagate_2d(Complex(0.0), p, ode_tol);
  const auto unit = riccati_propagate_2d(Complex(1.0), p, ode_tol);
  const auto init0 = initial_product_state(0.0, p);
  const auto init1 = initial_product_state(1.0, p);

  const Eigen::Vector2cd g_r = unit.final_state.lin;
  const Complex q_r =
      (unit.final_state.scalar - init1.scalar) - (zero.final_state.scalar - init0.scalar);
  const Complex k_r = zero.final_state.scalar;

  // Left path: the uncoupled evolution, known in closed form.
  const auto left0 = decoupled_final_state(0.0, p);
  const Eigen::Vector2cd g_l = decoupled_final_state(1.0, p).lin;
  const Complex q_l = 0.5 * (1.0 - std::polar(1.0, -2.0 * p.drive_angle));
  const Complex k_l = left0.scalar;

  const Eigen::Matrix2cd M = zero.final_state.quad + left0.quad.conjugate();
  const Eigen::Matrix2cd Minv = M.inverse();
  const Eigen::Vector2cd g_lc = g_l.conjugate();

  FrameKernel k;
  k.k0 = log_gaussian_integral<double, 2>(M, Eigen::Vector2cd::Zero(), 0.0) + k_r + std::conj(k_l);
  k.q = q_r - 0.5 - 0.25 * (g_r.transpose() * Minv * g_r)(0, 0);
  k.p = std::conj(q_l) - 0.5 - 0.25 * (g_lc.transpose() * Minv * g_lc)(0, 0);
  k.s = -0.5 * (g_r.transpose() * Minv * g_lc)(0, 0);
  k.max_norm_drift = std::max(zero.max_norm_drift, unit.max_norm_drift);
  return k;
}

InterferenceResult averaged_phase_riccati(const FrameState& state, const DimensionlessParams& p,
                                          double ode_tol, double tail) {
  const FrameKernel kernel = riccati_frame_kernel(p, ode_tol);
  Complex factor;
  if (const auto* coh = std::get_if<CoherentState>(&state)) {
    factor = kernel.coherent_expectation(coh->alpha);
  } else if (const auto* fock = std::get_if<FockState>(&state)) {
    factor = kernel.matrix(fock->number)(fock->number, fock->number);
  } else {
    const unsigned n_max = std::holds_alternative<DensityMatrix>(state)
                               ? static_cast<unsigned>(std::get<DensityMatrix>(state).dimension() - 1)
                               : truncation_for_tail(state, tail);
    const Eigen::MatrixXcd rho = fock_density_matrix(state, n_max);
    const Eigen::MatrixXcd K = kernel.matrix(n_max);
    // tr(rho K) = sum_nm rho_nm K_mn
    factor = (rho.transpose().cwiseProduct(K)).sum();
  }
  return make_interference_result(factor, unwrap_reference(state, p),
                                  InterferenceMethod::riccati_exact);
}

std::complex<double> interference_from_2d(const GaussianWavepacket2D& right,
                                          const GaussianWavepacket2D& left, double x) {
  const Eigen::Matrix2cd M = right.quad + left.quad.conjugate();
  const Eigen::Vector2cd j = right.lin + left.lin.conjugate();
  const Complex k = right.scalar + std::conj(left.scalar);
  if (!(M(1, 1).real() < 0.0)) {
    throw NonNormalizableError("interference_from_2d: combined X quadratic form not decaying");
  }
  const Complex lin = 2.0 * M(0, 1) * x + j(1);
  return std::sqrt(std::numbers::pi / -M(1, 1)) *
         std::exp(M(0, 0) * x * x + j(0) * x + k - lin * lin / (4.0 * M(1, 1)));
}

}  // namespace qframe
