#ifndef QFRAME_QUANTUM_ANALYTIC_HPP
#define QFRAME_QUANTUM_ANALYTIC_HPP

#include "qframe/core_model.hpp"
#include "qframe/frame_state.hpp"

#include <complex>
#include <stdexcept>
#include <string>

namespace qframe {

enum class InterferenceMethod { closed_form, husimi_integral, fock_sum, appendix_ode, riccati_exact };

[[nodiscard]] std::string to_string(InterferenceMethod method);

/// Frame-traced interference coefficient <e^{i phi}>.
struct InterferenceResult {
  std::complex<double> factor{1.0, 0.0};
  double visibility = 1.0;        // |factor|
  double phase = 0.0;             // arg(factor) in (-pi, pi]
  double unwrapped_phase = 0.0;   // continuous representative of arg(factor)
  InterferenceMethod method = InterferenceMethod::closed_form;
};

/// Builds a result whose unwrapped phase is the branch of arg(factor)
/// nearest to `phase_reference`.
[[nodiscard]] InterferenceResult make_interference_result(std::complex<double> factor,
                                                          double phase_reference,
                                                          InterferenceMethod method);

/// The two phases the frame back-action enters through: the rotation angle
/// kappa = m Omega T/(4M) of the frame amplitude and the state-independent
/// vacuum phase (m/8M)(Omega - omega) T.
struct BackActionPhases {
  double kappa = 0.0;
  double vacuum_phase = 0.0;

  static BackActionPhases from(const DimensionlessParams& p) {
    return {p.back_action, p.vacuum_phase()};
  }
};

enum class CoherentForm { exact, linearized };

/// Closed forms for the four named states. The coherent result is
/// exp(|alpha0|^2 (e^{i kappa} - 1)) unless `linearized` is requested. The
/// squeezed result is the exact coherent-basis average
/// 1/sqrt(cosh^2 r - e^{2 i kappa} sinh^2 r) (see squeezed_published_form for
/// the e^{i kappa} variant). Density matrices are rejected.
[[nodiscard]] InterferenceResult averaged_phase_closed(const FrameState& state,
                                                       const BackActionPhases& phases,
                                                       CoherentForm form = CoherentForm::exact);
[[nodiscard]] InterferenceResult averaged_phase_closed(const FrameState& state,
                                                       const DimensionlessParams& params,
                                                       CoherentForm form = CoherentForm::exact);
[[nodiscard]] InterferenceResult averaged_phase_closed(const FrameState& state,
                                                       const PhysicalConfig& config,
                                                       CoherentForm form = CoherentForm::exact);

enum class SqueezedForm { full, linearized };

/// e^{i vacuum_phase} / sqrt(cosh^2 r - e^{i kappa} sinh^2 r) and its
/// linearization 1/sqrt(1 - i kappa sinh^2 r), exactly as commonly quoted.
/// The full form disagrees with the coherent-basis average by kappa -> 2 kappa.
[[nodiscard]] std::complex<double> squeezed_published_form(double r, const BackActionPhases& phases,
                                                           SqueezedForm form);

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, std::complex<double> coarse, std::complex<double> fine)
      : std::runtime_error(what), coarse_(coarse), fine_(fine) {}
  [[nodiscard]] std::complex<double> coarse() const noexcept { return coarse_; }
  [[nodiscard]] std::complex<double> fine() const noexcept { return fine_; }

 private:
  std::complex<double> coarse_, fine_;
};

/// Polar grid over the coherent-state plane, centred on the state's
/// phase-space centroid. Zero fields are chosen automatically.
struct QuadratureSpec {
  double radius = 0.0;             // truncation radius R
  unsigned radial_panels = 0;      // Gauss-Legendre panels over [0, R]
  unsigned nodes_per_panel = 12;
  unsigned angular_nodes = 0;      // trapezoid nodes
  double tolerance = 1e-9;         // successive-refinement agreement
  unsigned max_refinements = 3;
};

/// (1/pi) integral d^2 alpha <alpha|rho|alpha e^{i kappa}> e^{i vacuum_phase},
/// integrated numerically; the grid is refined (nodes doubled) until two
/// successive estimates agree within `tolerance`.
[[nodiscard]] InterferenceResult averaged_phase_husimi(const FrameState& state,
                                                       const BackActionPhases& phases,
                                                       const QuadratureSpec& quad = {});
[[nodiscard]] InterferenceResult averaged_phase_husimi(const FrameState& state,
                                                       const PhysicalConfig& config,
                                                       const QuadratureSpec& quad = {});

struct FockSumResult {
  InterferenceResult result;
  double tail = 0.0;  // probability above the truncation
};

/// sum_N P_N e^{i kappa N} e^{i vacuum_phase}. Only the Fock-diagonal of rho
/// enters, so any state is accepted; throws ConfigError if the weight above
/// `max_number` exceeds `tail_threshold`.
[[nodiscard]] FockSumResult averaged_phase_fock_sum(const FrameState& state,
                                                    const BackActionPhases& phases,
                                                    unsigned max_number,
                                                    double tail_threshold = 1e-12);
[[nodiscard]] FockSumResult averaged_phase_fock_sum(const FrameState& state,
                                                    const PhysicalConfig& config,
                                                    unsigned max_number,
                                                    double tail_threshold = 1e-12);

struct DephasingThreshold {
  FrameStateKind state_kind = FrameStateKind::thermal;
  double frame_energy_uncertainty = 0.0;        // quoted approximation [J]
  double exact_frame_energy_uncertainty = 0.0;  // hbar Omega sqrt(var n) [J]
  double atom_energy_uncertainty = 0.0;         // (m/M) Delta E_frame [J]
  double dephasing_time = 0.0;                  // hbar / Delta E_atom [s]
  double suppression_lhs = 0.0;  // sinh^2 r, or 1/(hbar Omega beta)
  double suppression_rhs = 0.0;  // 4M / (m Omega T)
};

/// Energy-uncertainty form of the squeezing and temperature suppression
/// conditions. Only squeezed and thermal states are accepted.
[[nodiscard]] DephasingThreshold dephasing_threshold(const FrameState& state,
                                                     const PhysicalConfig& config);

/// Squeeze parameter at which sinh^2 r equals 4M/(m Omega T): exact inverse
/// and the large-r estimate (1/2) ln(16 M/(m Omega T)).
struct SqueezeThreshold {
  double ratio = 0.0;  // 4M / (m Omega T)
  double r_exact = 0.0;
  double r_large_r_estimate = 0.0;
};
[[nodiscard]] SqueezeThreshold squeeze_threshold(const PhysicalConfig& config);

}  // namespace qframe

#endif  // QFRAME_QUANTUM_ANALYTIC_HPP
