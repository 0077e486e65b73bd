#ifndef QFRAME_FRAME_STATE_HPP
#define QFRAME_FRAME_STATE_HPP

#include "qframe/core_model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <variant>

namespace qframe {

struct CoherentState {
  std::complex<double> alpha;
};

struct FockState {
  unsigned number = 0;
};

/// S(xi)|0> with xi = r e^{i theta}.
struct SqueezedVacuum {
  double r = 0.0;
  double theta = 0.0;
};

/// Gibbs state of the frame mode, stored through the reduced inverse
/// temperature y = beta hbar Omega.
struct ThermalState {
  double beta_hbar_omega = 0.0;

  static ThermalState from_beta(double beta, const PhysicalConfig& config) {
    return {beta * config.hbar * config.frame_freq};
  }
  [[nodiscard]] double beta(const PhysicalConfig& config) const {
    return beta_hbar_omega / (config.hbar * config.frame_freq);
  }
  /// 1 / (e^y - 1)
  [[nodiscard]] double mean_occupation() const { return 1.0 / std::expm1(beta_hbar_omega); }
};

/// Fock-basis density matrix, validated on construction: Hermitian, unit
/// trace and positive semidefinite, each to 1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd rho);

  [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return rho_.rows(); }
  [[nodiscard]] unsigned max_number() const noexcept {
    return static_cast<unsigned>(rho_.rows() - 1);
  }

 private:
  Eigen::MatrixXcd rho_;
};

using FrameState = std::variant<CoherentState, FockState, SqueezedVacuum, ThermalState, DensityMatrix>;

enum class FrameStateKind { coherent, fock, squeezed_vacuum, thermal, density_matrix };

[[nodiscard]] FrameStateKind kind_of(const FrameState& state);
[[nodiscard]] std::string to_string(FrameStateKind kind);

/// <n> of the frame state.
[[nodiscard]] double mean_occupation(const FrameState& state);

/// Probability weight above Fock level `max_number`.
[[nodiscard]] double tail_probability(const FrameState& state, unsigned max_number);

/// Smallest max_number whose tail is below `tail`.
[[nodiscard]] unsigned truncation_for_tail(const FrameState& state, double tail);

/// P_N = <N|rho|N> for N = 0..max_number.
[[nodiscard]] Eigen::VectorXd fock_probabilities(const FrameState& state, unsigned max_number);

/// Truncated Fock-basis density matrix (not renormalized).
[[nodiscard]] Eigen::MatrixXcd fock_density_matrix(const FrameState& state, unsigned max_number);

/// Thermal density matrix truncated where the Gibbs tail falls below `tail`.
[[nodiscard]] DensityMatrix thermal_density_matrix(double beta_hbar_omega, double tail = 1e-12);

}  // namespace qframe

#endif  // QFRAME_FRAME_STATE_HPP
