#ifndef QFRAME_GAUSSIAN_HPP
#define QFRAME_GAUSSIAN_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace qframe {

class NonNormalizableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// psi(xi) = exp(xi^T A xi + b^T xi + c) over `Modes` dimensionless coordinates.
/// A is complex symmetric; normalizability requires Re(A) negative definite.
template <typename Scalar, int Modes>
struct GaussianWavepacket {
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, Modes, Modes>;
  using Vector = Eigen::Matrix<Complex, Modes, 1>;
  using Point = Eigen::Matrix<Scalar, Modes, 1>;

  Matrix quad = Matrix::Zero();
  Vector lin = Vector::Zero();
  Complex scalar{0};

  // Single-mode spellings a, b, c.
  Complex a() const requires(Modes == 1) { return quad(0, 0); }
  Complex b() const requires(Modes == 1) { return lin(0); }
  Complex c() const requires(Modes == 1) { return scalar; }

  static GaussianWavepacket from_coefficients(Complex a, Complex b, Complex c)
    requires(Modes == 1)
  {
    GaussianWavepacket g;
    g.quad(0, 0) = a;
    g.lin(0) = b;
    g.scalar = c;
    return g;
  }
};

using GaussianWavepacket1D = GaussianWavepacket<double, 1>;
using GaussianWavepacket2D = GaussianWavepacket<double, 2>;

/// log of  integral exp(xi^T M xi + j^T xi + k) d^n xi  for complex symmetric M
/// with -Re(M) positive definite. Eliminates one coordinate at a time; each
/// pivot then has positive real part, so principal square roots give the
/// branch continuous with the real case.
template <typename Scalar, int Modes>
std::complex<Scalar> log_gaussian_integral(
    Eigen::Matrix<std::complex<Scalar>, Modes, Modes> M,
    Eigen::Matrix<std::complex<Scalar>, Modes, 1> j, std::complex<Scalar> k) {
  using Complex = std::complex<Scalar>;
  const Scalar log_pi = std::log(Scalar(3.14159265358979323846));
  const int n = static_cast<int>(M.rows());
  Complex result = k;
  for (int last = n - 1; last >= 0; --last) {
    const Complex pivot = -M(last, last);
    if (!(pivot.real() > Scalar(0))) {
      throw NonNormalizableError("Gaussian quadratic form is not negative definite");
    }
    // integral over xi_last of exp(-p u^2 + (j_last + 2 sum_i M_i,last xi_i) u)
    result += Scalar(0.5) * (log_pi - std::log(pivot));
    const Complex jl = j(last);
    for (int r = 0; r < last; ++r) {
      for (int s = 0; s < last; ++s) {
        M(r, s) += M(r, last) * M(s, last) / pivot;
      }
      j(r) += jl * M(r, last) / pivot;
    }
    result += jl * jl / (Scalar(4) * pivot);
  }
  return result;
}

/// log of the squared L2 norm.
template <typename Scalar, int Modes>
Scalar log_norm_squared(const GaussianWavepacket<Scalar, Modes>& psi) {
  using G = GaussianWavepacket<Scalar, Modes>;
  typename G::Matrix M = (psi.quad + psi.quad.conjugate()).eval();
  typename G::Vector j = (psi.lin + psi.lin.conjugate()).eval();
  return log_gaussian_integral<Scalar, Modes>(M, j, psi.scalar + std::conj(psi.scalar)).real();
}

template <typename Scalar, int Modes>
Scalar norm_squared(const GaussianWavepacket<Scalar, Modes>& psi) {
  return std::exp(log_norm_squared(psi));
}

/// log <lhs|rhs> = log integral conj(lhs) rhs.
template <typename Scalar, int Modes>
std::complex<Scalar> log_overlap(const GaussianWavepacket<Scalar, Modes>& lhs,
                                 const GaussianWavepacket<Scalar, Modes>& rhs) {
  return log_gaussian_integral<Scalar, Modes>((lhs.quad.conjugate() + rhs.quad).eval(),
                                              (lhs.lin.conjugate() + rhs.lin).eval(),
                                              std::conj(lhs.scalar) + rhs.scalar);
}

template <typename Scalar, int Modes>
std::complex<Scalar> overlap(const GaussianWavepacket<Scalar, Modes>& lhs,
                             const GaussianWavepacket<Scalar, Modes>& rhs) {
  return std::exp(log_overlap(lhs, rhs));
}

template <typename Scalar, int Modes>
std::complex<Scalar> evaluate(const GaussianWavepacket<Scalar, Modes>& psi,
                              const typename GaussianWavepacket<Scalar, Modes>::Point& xi) {
  const auto z = xi.template cast<std::complex<Scalar>>();
  return std::exp((z.transpose() * psi.quad * z)(0, 0) + (psi.lin.transpose() * z)(0, 0) +
                  psi.scalar);
}

template <typename Scalar, int Modes>
GaussianWavepacket<Scalar, Modes> normalized(GaussianWavepacket<Scalar, Modes> psi) {
  psi.scalar -= Scalar(0.5) * log_norm_squared(psi);
  return psi;
}

/// True when both eigenvalues of Re(A) are negative.
template <typename Scalar, int Modes>
bool is_normalizable(const GaussianWavepacket<Scalar, Modes>& psi) {
  const Eigen::Matrix<Scalar, Modes, Modes> re = psi.quad.real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Modes, Modes>> solver(re);
  return solver.eigenvalues().maxCoeff() < Scalar(0);
}

/// Normalized oscillator ground state exp(-xi^2 sqrt(lambda)/4) in units where
/// the Hamiltonian is -d^2 + lambda xi^2 / 4.
inline GaussianWavepacket1D oscillator_ground_state(double lambda = 1.0) {
  const double w = std::sqrt(lambda);
  return normalized(GaussianWavepacket1D::from_coefficients(-w / 4.0, 0.0, 0.0));
}

/// Frame coherent state |alpha> written in the atom-scaled coordinate
/// X~ = X sqrt(2 M omega / hbar): exp(-rho X~^2/4 + alpha sqrt(rho) X~ - alpha Re(alpha)),
/// normalized.
inline GaussianWavepacket1D frame_coherent_state(std::complex<double> alpha, double rho) {
  const double sr = std::sqrt(rho);
  auto g = GaussianWavepacket1D::from_coefficients(-rho / 4.0, alpha * sr, -alpha * alpha.real());
  g.scalar += 0.25 * std::log(rho / (2.0 * 3.14159265358979323846));
  return g;
}

}  // namespace qframe

#endif  // QFRAME_GAUSSIAN_HPP
