#include "qframe/quantum_analytic.hpp"

#include "qframe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace qframe {

namespace {

using Complex = std::complex<double>;
constexpr Complex I{0.0, 1.0};
constexpr double log_domain_threshold = 300.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// e^{i x} - 1 without cancellation for small x.
Complex expm1_i(double x) {
  const double s = std::sin(0.5 * x);
  return {-2.0 * s * s, std::sin(x)};
}

double log_cosh(double r) {
  const double a = std::abs(r);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

/// 1/sqrt(cosh^2 r - z sinh^2 r) with |z| = 1. The radicand has real part
/// >= 1, so the principal root is continuous in r and arg z.
Complex inverse_sqrt_squeeze_radicand(double r, Complex z, Complex one_minus_z) {
  if (std::abs(r) <= log_domain_threshold) {
    const double ch = std::cosh(r), sh = std::sinh(r);
    return 1.0 / std::sqrt(ch * ch - z * sh * sh);
  }
  // cosh^2 r (1 - z) + z, factored through log cosh r
  if (one_minus_z == 0.0) return 1.0 / std::sqrt(z);
  const double lc2 = 2.0 * log_cosh(r);
  const Complex log_radicand = lc2 + std::log(one_minus_z + z * std::exp(-lc2));
  return std::exp(-0.5 * log_radicand);
}

Complex thermal_ratio(double y, double kappa) {
  // sinh(y/2) / sinh(y/2 - i kappa/2)
  if (0.5 * y <= log_domain_threshold) {
    return std::sinh(0.5 * y) / std::sinh(Complex(0.5 * y, -0.5 * kappa));
  }
  const double q = std::exp(-y);
  return -std::expm1(-y) * std::polar(1.0, 0.5 * kappa) / (1.0 - q * std::polar(1.0, kappa));
}

struct HusimiKernel {
  Complex center{0.0};
  double radius = 6.0;
  unsigned min_angular = 32;
  std::function<Complex(Complex)> value;  // <alpha|rho|alpha z>, alpha = center + delta
};

HusimiKernel make_kernel(const FrameState& state, double kappa) {
  const Complex z = std::polar(1.0, kappa);
  const Complex zm1 = expm1_i(kappa);
  return std::visit(
      overloaded{
          [&](const CoherentState& s) {
            // exact rewrite in delta = alpha - alpha0:
            // (z - 1)(|alpha0|^2 + conj(alpha0) delta) - |delta|^2
            const Complex a0 = s.alpha;
            const double n0 = std::norm(a0);
            return HusimiKernel{a0, 6.0, 32, [=](Complex d) {
                                  return std::exp(zm1 * (n0 + std::conj(a0) * d) - std::norm(d));
                                }};
          },
          [&](const FockState& s) {
            const double n = s.number;
            const double lg = std::lgamma(n + 1.0);
            const Complex zn = std::polar(1.0, kappa * n);
            return HusimiKernel{0.0, 6.0 * std::sqrt(n + 1.0), 32, [=](Complex d) {
                                  const double s2 = std::norm(d);
                                  if (n == 0.0) return Complex(std::exp(-s2));
                                  if (s2 == 0.0) return Complex(0.0);
                                  return zn * std::exp(-s2 + n * std::log(s2) - lg);
                                }};
          },
          [&](const SqueezedVacuum& s) {
            const double t = std::tanh(s.r);
            const Complex e = std::polar(1.0, s.theta);
            const double pre = std::exp(-log_cosh(s.r));
            return HusimiKernel{0.0, 6.0 * std::cosh(s.r), 32, [=](Complex d) {
                                  const Complex az = d * z;
                                  return pre * std::exp(-std::norm(d) -
                                                        0.5 * t *
                                                            (e * std::conj(d) * std::conj(d) +
                                                             std::conj(e) * az * az));
                                }};
          },
          [&](const ThermalState& s) {
            const double q = std::exp(-s.beta_hbar_omega);
            const double w = -std::expm1(-s.beta_hbar_omega);  // 1/(nbar + 1)
            const double nbar = s.mean_occupation();
            return HusimiKernel{0.0, 6.0 * std::sqrt(nbar + 1.0), 32, [=](Complex d) {
                                  // -|a|^2 (1 - q z) = -|a|^2 (w - q (z - 1))
                                  return w * std::exp(-std::norm(d) * (w - q * zm1));
                                }};
          },
          [&](const DensityMatrix& s) {
            const Eigen::Index dim = s.dimension();
            Eigen::VectorXcd phases(dim);
            for (Eigen::Index n = 0; n < dim; ++n) phases(n) = std::polar(1.0, kappa * n);
            const Eigen::MatrixXcd rotated = s.matrix() * phases.asDiagonal();
            const double nbar = mean_occupation(state);
            const double radius =
                std::max(6.0 * std::sqrt(nbar + 1.0), std::sqrt(static_cast<double>(dim)) + 6.0);
            return HusimiKernel{
                0.0, radius, static_cast<unsigned>(2 * dim + 8), [=](Complex d) {
                  // u_n = e^{-|a|^2/2} a^n / sqrt(n!)
                  Eigen::VectorXcd u(dim);
                  u(0) = std::exp(-0.5 * std::norm(d));
                  for (Eigen::Index n = 1; n < dim; ++n) {
                    u(n) = u(n - 1) * d / std::sqrt(static_cast<double>(n));
                  }
                  return Complex(u.adjoint() * rotated * u);
                }};
          }},
      state);
}

Complex integrate_polar(const HusimiKernel& kernel, unsigned panels, unsigned nodes_per_panel,
                        unsigned angular) {
  const auto rule = gauss_legendre(nodes_per_panel);
  const double width = kernel.radius / panels;
  const double dphi = 2.0 * std::numbers::pi / angular;
  std::vector<Complex> ring(angular);
  std::vector<Complex> radial;
  radial.reserve(static_cast<std::size_t>(panels) * nodes_per_panel);
  for (unsigned p = 0; p < panels; ++p) {
    const double lo = p * width;
    for (unsigned k = 0; k < nodes_per_panel; ++k) {
      const double s = lo + 0.5 * width * (rule.nodes[k] + 1.0);
      for (unsigned j = 0; j < angular; ++j) {
        ring[j] = kernel.value(std::polar(s, j * dphi));
      }
      const Complex ring_sum = pairwise_sum<Complex>(ring);
      radial.push_back(0.5 * width * rule.weights[k] * s * dphi * ring_sum);
    }
  }
  return pairwise_sum<Complex>(radial) / std::numbers::pi;
}

/// Branch used to unwrap numerical results: the closed form where one exists.
double reference_phase(const FrameState& state, const BackActionPhases& phases) {
  if (std::holds_alternative<DensityMatrix>(state)) {
    return phases.vacuum_phase + phases.kappa * mean_occupation(state);
  }
  return averaged_phase_closed(state, phases).unwrapped_phase;
}

}  // namespace

std::string to_string(InterferenceMethod method) {
  switch (method) {
    case InterferenceMethod::closed_form: return "closed_form";
    case InterferenceMethod::husimi_integral: return "husimi";
    case InterferenceMethod::fock_sum: return "fock_sum";
    case InterferenceMethod::appendix_ode: return "appendix_ode";
    case InterferenceMethod::riccati_exact: return "riccati_exact";
  }
  return "unknown";
}

InterferenceResult make_interference_result(Complex factor, double phase_reference,
                                            InterferenceMethod method) {
  InterferenceResult r;
  r.factor = factor;
  r.visibility = std::abs(factor);
  r.phase = std::arg(factor);
  r.unwrapped_phase =
      phase_reference + std::remainder(r.phase - phase_reference, 2.0 * std::numbers::pi);
  r.method = method;
  return r;
}

InterferenceResult averaged_phase_closed(const FrameState& state, const BackActionPhases& phases,
                                         CoherentForm form) {
  const double k = phases.kappa;
  const double psi0 = phases.vacuum_phase;
  auto with_phase = [](Complex factor, double unwrapped) {
    InterferenceResult r;
    r.factor = factor;
    r.visibility = std::abs(factor);
    r.phase = std::arg(factor);
    r.unwrapped_phase = unwrapped;
    r.method = InterferenceMethod::closed_form;
    return r;
  };
  return std::visit(
      overloaded{
          [&](const CoherentState& s) {
            const double n = std::norm(s.alpha);
            if (form == CoherentForm::linearized) {
              const double ph = k * n + psi0;
              return with_phase(std::polar(1.0, ph), ph);
            }
            const Complex exponent = n * expm1_i(k) + I * psi0;
            return with_phase(std::exp(exponent), exponent.imag());
          },
          [&](const FockState& s) {
            const double ph = k * s.number + psi0;
            return with_phase(std::polar(1.0, ph), ph);
          },
          [&](const SqueezedVacuum& s) {
            const Complex root =
                inverse_sqrt_squeeze_radicand(s.r, std::polar(1.0, 2.0 * k), expm1_i(2.0 * k) * -1.0);
            return with_phase(root * std::polar(1.0, psi0), psi0 + std::arg(root));
          },
          [&](const ThermalState& s) {
            // e^{-i kappa/2 + i psi0} sinh(y/2) / sinh(y/2 - i kappa/2)
            const Complex ratio = thermal_ratio(s.beta_hbar_omega, k);
            const double base = psi0 - 0.5 * k;
            const Complex factor = ratio * std::polar(1.0, base);
            // arg(ratio e^{-i kappa/2}) = arg((1-q)/(1-q e^{i kappa})) lies in (-pi/2, pi/2)
            const double reduced = std::arg(ratio * std::polar(1.0, -0.5 * k));
            return with_phase(factor, psi0 + reduced);
          },
          [&](const DensityMatrix&) -> InterferenceResult {
            throw ConfigError(
                "averaged_phase_closed: density matrices have no closed form; use the Husimi "
                "integral or the Fock sum");
          }},
      state);
}

InterferenceResult averaged_phase_closed(const FrameState& state, const DimensionlessParams& params,
                                         CoherentForm form) {
  return averaged_phase_closed(state, BackActionPhases::from(params), form);
}

InterferenceResult averaged_phase_closed(const FrameState& state, const PhysicalConfig& config,
                                         CoherentForm form) {
  return averaged_phase_closed(state, to_dimensionless(config), form);
}

Complex squeezed_published_form(double r, const BackActionPhases& phases, SqueezedForm form) {
  const Complex vacuum = std::polar(1.0, phases.vacuum_phase);
  if (form == SqueezedForm::linearized) {
    const double sh = std::sinh(r);
    return vacuum / std::sqrt(Complex(1.0, -phases.kappa * sh * sh));
  }
  return vacuum * inverse_sqrt_squeeze_radicand(r, std::polar(1.0, phases.kappa),
                                                -expm1_i(phases.kappa));
}

InterferenceResult averaged_phase_husimi(const FrameState& state, const BackActionPhases& phases,
                                         const QuadratureSpec& quad) {
  HusimiKernel kernel = make_kernel(state, phases.kappa);
  if (quad.radius > 0.0) kernel.radius = quad.radius;
  unsigned panels =
      quad.radial_panels > 0 ? quad.radial_panels
                             : std::max(4u, static_cast<unsigned>(std::ceil(kernel.radius)));
  unsigned angular = quad.angular_nodes;
  if (angular == 0) {
    const double want = std::max<double>({32.0, static_cast<double>(kernel.min_angular),
                                          2.0 * kernel.radius * kernel.radius});
    angular = static_cast<unsigned>(std::ceil(want / 8.0)) * 8;
  }
  const unsigned nodes = std::max(2u, quad.nodes_per_panel);

  Complex previous = integrate_polar(kernel, panels, nodes, angular);
  Complex current = previous;
  bool converged = false;
  for (unsigned level = 0; level < std::max(1u, quad.max_refinements); ++level) {
    panels *= 2;
    angular *= 2;
    current = integrate_polar(kernel, panels, nodes, angular);
    if (std::abs(current - previous) <= quad.tolerance) {
      converged = true;
      break;
    }
    previous = current;
  }
  if (!converged) {
    throw QuadratureError("Husimi quadrature did not converge", previous, current);
  }
  const Complex factor = current * std::polar(1.0, phases.vacuum_phase);
  return make_interference_result(factor, reference_phase(state, phases),
                                  InterferenceMethod::husimi_integral);
}

InterferenceResult averaged_phase_husimi(const FrameState& state, const PhysicalConfig& config,
                                         const QuadratureSpec& quad) {
  return averaged_phase_husimi(state, BackActionPhases::from(to_dimensionless(config)), quad);
}

FockSumResult averaged_phase_fock_sum(const FrameState& state, const BackActionPhases& phases,
                                      unsigned max_number, double tail_threshold) {
  const double tail = tail_probability(state, max_number);
  if (tail > tail_threshold) {
    throw ConfigError("averaged_phase_fock_sum: tail probability " + std::to_string(tail) +
                      " above threshold at N_max=" + std::to_string(max_number));
  }
  const Eigen::VectorXd p = fock_probabilities(state, max_number);
  std::vector<Complex> terms(p.size());
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    terms[n] = p(n) * std::polar(1.0, phases.kappa * static_cast<double>(n));
  }
  const Complex factor = pairwise_sum<Complex>(terms) * std::polar(1.0, phases.vacuum_phase);
  return {make_interference_result(factor, reference_phase(state, phases),
                                   InterferenceMethod::fock_sum),
          tail};
}

FockSumResult averaged_phase_fock_sum(const FrameState& state, const PhysicalConfig& config,
                                      unsigned max_number, double tail_threshold) {
  return averaged_phase_fock_sum(state, BackActionPhases::from(to_dimensionless(config)),
                                 max_number, tail_threshold);
}

DephasingThreshold dephasing_threshold(const FrameState& state, const PhysicalConfig& config) {
  config.validate();
  const double hw = config.hbar * config.frame_freq;
  const double eps = config.atom_mass / config.frame_mass;
  DephasingThreshold out;
  out.state_kind = kind_of(state);
  out.suppression_rhs = 4.0 / (eps * config.frame_freq * config.dwell_time);
  if (const auto* sq = std::get_if<SqueezedVacuum>(&state)) {
    out.frame_energy_uncertainty = hw * std::sinh(2.0 * sq->r) / std::numbers::sqrt2;
    out.exact_frame_energy_uncertainty = out.frame_energy_uncertainty;
    out.suppression_lhs = std::pow(std::sinh(sq->r), 2);
  } else if (const auto* th = std::get_if<ThermalState>(&state)) {
    const double y = th->beta_hbar_omega;
    out.frame_energy_uncertainty = hw / y;
    out.exact_frame_energy_uncertainty = hw / (2.0 * std::sinh(0.5 * y));
    out.suppression_lhs = 1.0 / y;
  } else {
    throw ConfigError("dephasing_threshold: only squeezed and thermal states dephase");
  }
  out.atom_energy_uncertainty = eps * out.frame_energy_uncertainty;
  out.dephasing_time = config.hbar / out.atom_energy_uncertainty;
  return out;
}

SqueezeThreshold squeeze_threshold(const PhysicalConfig& config) {
  config.validate();
  SqueezeThreshold out;
  out.ratio = 4.0 * config.frame_mass /
              (config.atom_mass * config.frame_freq * config.dwell_time);
  out.r_exact = std::asinh(std::sqrt(out.ratio));
  out.r_large_r_estimate = 0.5 * std::log(4.0 * out.ratio);
  return out;
}

}  // namespace qframe
