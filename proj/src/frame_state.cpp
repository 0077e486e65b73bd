#include "qframe/frame_state.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>

namespace qframe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::VectorXcd coherent_amplitudes(std::complex<double> alpha, unsigned max_number) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(max_number + 1);
  const double mod = std::abs(alpha);
  if (mod == 0.0) {
    psi(0) = 1.0;
    return psi;
  }
  const double log_mod = std::log(mod);
  const double arg = std::arg(alpha);
  for (unsigned n = 0; n <= max_number; ++n) {
    const double log_amp = -0.5 * mod * mod + n * log_mod - 0.5 * std::lgamma(n + 1.0);
    psi(n) = std::polar(std::exp(log_amp), n * arg);
  }
  return psi;
}

// <2n|xi> = (cosh r)^{-1/2} (-e^{i theta} tanh(r)/2)^n sqrt((2n)!)/n!
Eigen::VectorXcd squeezed_amplitudes(const SqueezedVacuum& s, unsigned max_number) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(max_number + 1);
  const std::complex<double> ratio = -0.5 * std::polar(std::tanh(s.r), s.theta);
  std::complex<double> amp = 1.0 / std::sqrt(std::cosh(s.r));
  for (unsigned n = 0; 2 * n <= max_number; ++n) {
    psi(2 * n) = amp;
    amp *= ratio * std::sqrt((2.0 * n + 2.0) * (2.0 * n + 1.0)) / (n + 1.0);
  }
  return psi;
}

double squeezed_tail(const SqueezedVacuum& s, unsigned max_number) {
  const double t2 = std::pow(std::tanh(s.r), 2);
  if (t2 == 0.0) return 0.0;
  double term = 1.0 / std::cosh(s.r);  // P_0
  double tail = 0.0;
  for (unsigned long n = 0; n < 100'000'000UL; ++n) {
    if (2 * n > max_number) {
      tail += term;
      if (term < 1e-18 * tail) return tail + term * t2 / (1.0 - t2);
    }
    term *= t2 * (2.0 * n + 1.0) / (2.0 * n + 2.0);
    if (term == 0.0) break;
  }
  return tail;
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
    throw ConfigError("density matrix must be square and non-empty");
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace() - 1.0) > 1e-10) {
    throw ConfigError("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10) {
    throw ConfigError("density matrix is not positive semidefinite");
  }
}

FrameStateKind kind_of(const FrameState& state) {
  return std::visit(overloaded{[](const CoherentState&) { return FrameStateKind::coherent; },
                               [](const FockState&) { return FrameStateKind::fock; },
                               [](const SqueezedVacuum&) { return FrameStateKind::squeezed_vacuum; },
                               [](const ThermalState&) { return FrameStateKind::thermal; },
                               [](const DensityMatrix&) { return FrameStateKind::density_matrix; }},
                    state);
}

std::string to_string(FrameStateKind kind) {
  switch (kind) {
    case FrameStateKind::coherent: return "coherent";
    case FrameStateKind::fock: return "fock";
    case FrameStateKind::squeezed_vacuum: return "squeezed";
    case FrameStateKind::thermal: return "thermal";
    case FrameStateKind::density_matrix: return "density_matrix";
  }
  return "unknown";
}

double mean_occupation(const FrameState& state) {
  return std::visit(
      overloaded{[](const CoherentState& s) { return std::norm(s.alpha); },
                 [](const FockState& s) { return static_cast<double>(s.number); },
                 [](const SqueezedVacuum& s) { return std::pow(std::sinh(s.r), 2); },
                 [](const ThermalState& s) { return s.mean_occupation(); },
                 [](const DensityMatrix& s) {
                   double n = 0.0;
                   for (Eigen::Index k = 0; k < s.dimension(); ++k) {
                     n += static_cast<double>(k) * s.matrix()(k, k).real();
                   }
                   return n;
                 }},
      state);
}

double tail_probability(const FrameState& state, unsigned max_number) {
  return std::visit(
      overloaded{[&](const CoherentState& s) {
                   const double mean = std::norm(s.alpha);
                   return mean == 0.0 ? 0.0 : boost::math::gamma_p(max_number + 1.0, mean);
                 },
                 [&](const FockState& s) { return s.number > max_number ? 1.0 : 0.0; },
                 [&](const SqueezedVacuum& s) { return squeezed_tail(s, max_number); },
                 [&](const ThermalState& s) {
                   return std::exp(-s.beta_hbar_omega * (max_number + 1.0));
                 },
                 [&](const DensityMatrix& s) {
                   double tail = 0.0;
                   for (Eigen::Index k = max_number + 1; k < s.dimension(); ++k) {
                     tail += s.matrix()(k, k).real();
                   }
                   return std::max(tail, 0.0);
                 }},
      state);
}

unsigned truncation_for_tail(const FrameState& state, double tail) {
  if (tail_probability(state, 0) < tail) return 0;
  unsigned hi = 1;
  while (tail_probability(state, hi) >= tail) {
    if (hi >= (1u << 26)) throw ConfigError("Fock truncation exceeds 2^26 levels");
    hi *= 2;
  }
  unsigned lo = hi / 2;  // tail(lo) >= tail
  while (hi - lo > 1) {
    const unsigned mid = lo + (hi - lo) / 2;
    (tail_probability(state, mid) < tail ? hi : lo) = mid;
  }
  return hi;
}

Eigen::VectorXd fock_probabilities(const FrameState& state, unsigned max_number) {
  return std::visit(
      overloaded{
          [&](const CoherentState& s) -> Eigen::VectorXd {
            return coherent_amplitudes(s.alpha, max_number).cwiseAbs2();
          },
          [&](const FockState& s) -> Eigen::VectorXd {
            Eigen::VectorXd p = Eigen::VectorXd::Zero(max_number + 1);
            if (s.number <= max_number) p(s.number) = 1.0;
            return p;
          },
          [&](const SqueezedVacuum& s) -> Eigen::VectorXd {
            return squeezed_amplitudes(s, max_number).cwiseAbs2();
          },
          [&](const ThermalState& s) -> Eigen::VectorXd {
            Eigen::VectorXd p(max_number + 1);
            const double weight = -std::expm1(-s.beta_hbar_omega);
            for (unsigned n = 0; n <= max_number; ++n) {
              p(n) = weight * std::exp(-s.beta_hbar_omega * n);
            }
            return p;
          },
          [&](const DensityMatrix& s) -> Eigen::VectorXd {
            Eigen::VectorXd p = Eigen::VectorXd::Zero(max_number + 1);
            const Eigen::Index n = std::min<Eigen::Index>(s.dimension(), max_number + 1);
            p.head(n) = s.matrix().diagonal().head(n).real();
            return p;
          }},
      state);
}

Eigen::MatrixXcd fock_density_matrix(const FrameState& state, unsigned max_number) {
  const Eigen::Index dim = max_number + 1;
  return std::visit(
      overloaded{
          [&](const CoherentState& s) -> Eigen::MatrixXcd {
            const auto psi = coherent_amplitudes(s.alpha, max_number);
            return psi * psi.adjoint();
          },
          [&](const SqueezedVacuum& s) -> Eigen::MatrixXcd {
            const auto psi = squeezed_amplitudes(s, max_number);
            return psi * psi.adjoint();
          },
          [&](const DensityMatrix& s) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
            const Eigen::Index n = std::min(s.dimension(), dim);
            rho.topLeftCorner(n, n) = s.matrix().topLeftCorner(n, n);
            return rho;
          },
          [&](const auto&) -> Eigen::MatrixXcd {
            return fock_probabilities(state, max_number).cast<std::complex<double>>().asDiagonal();
          }},
      state);
}

DensityMatrix thermal_density_matrix(double beta_hbar_omega, double tail) {
  const ThermalState thermal{beta_hbar_omega};
  const unsigned n_max = truncation_for_tail(thermal, tail);
  return DensityMatrix(fock_density_matrix(thermal, n_max));
}

}  // namespace qframe
