#ifndef QFRAME_CORE_MODEL_HPP
#define QFRAME_CORE_MODEL_HPP

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qframe {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double light_speed = 2.998e8;   // m/s
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by operations whose precondition is the scale hierarchy when the
/// caller did not opt into out-of-regime evaluation.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RegimePolicy { enforce, allow };

/// SI-unit parameters of the atom, the vibrating frame and the traversal.
///
/// `wire_length` and `traversal_velocity` are optional inputs: whichever is
/// missing is derived from `dwell_time` so that v T = L always holds after
/// `resolved()`.
struct PhysicalConfig {
  double atom_mass = 0.0;        // m [kg]
  double frame_mass = 0.0;       // M [kg]
  double trap_freq = 0.0;        // omega [rad/s]
  double frame_freq = 0.0;       // Omega [rad/s]
  double amplitude = 0.0;        // X0 [m]
  double initial_phase = 0.0;    // phi0 [rad]
  double dwell_time = 0.0;       // T [s]
  double wire_length = 0.0;      // L [m], 0 = derive
  double traversal_velocity = 0.0;  // v [m/s], 0 = derive
  double hbar = constants::hbar;
  double light_speed = constants::light_speed;

  /// Fills in L or v and validates every invariant; throws ConfigError.
  [[nodiscard]] PhysicalConfig resolved() const;
  void validate() const;

  /// Frame zero-point amplitude sqrt(hbar / (2 M Omega)).
  [[nodiscard]] double frame_zero_point() const;
  /// Atom zero-point amplitude sqrt(hbar / (2 m omega)).
  [[nodiscard]] double atom_zero_point() const;
};

/// Dimensionless groups every downstream computation runs on.
struct DimensionlessParams {
  double mass_ratio = 0.0;        // epsilon = m/M
  double freq_ratio = 0.0;        // rho = Omega/omega
  double dwell_angle = 0.0;       // Theta = omega T
  double drive_angle = 0.0;       // Omega T
  double scaled_amplitude = 0.0;  // chi = X0 / X_zp
  double back_action = 0.0;       // kappa = epsilon Omega T / 4

  /// Builds the groups from (epsilon, rho, Theta); epsilon = 0 is the
  /// decoupled limit and is accepted here although no SI config maps to it.
  static DimensionlessParams from_groups(double epsilon, double rho, double omega_T,
                                         double scaled_amplitude = 0.0);

  /// Phase common to every frame state: (m/8M)(Omega - omega) T.
  [[nodiscard]] double vacuum_phase() const {
    return mass_ratio / 8.0 * (drive_angle - dwell_angle);
  }
  void validate() const;
};

[[nodiscard]] DimensionlessParams to_dimensionless(const PhysicalConfig& config);

struct RegimeCheck {
  std::string name;
  double lhs = 0.0;  // the "small" side
  double rhs = 0.0;  // the "large" side
  bool satisfied = false;
};

struct RegimeReport {
  bool regime_ok = true;
  std::vector<RegimeCheck> checks;

  [[nodiscard]] std::string summary() const;
};

inline constexpr double default_regime_margin = 10.0;

/// "a << b" passes iff b/a >= margin. The coherent back-action check is
/// added only when an initial amplitude is supplied.
[[nodiscard]] RegimeReport validate_regime(const PhysicalConfig& config,
                                           double margin = default_regime_margin,
                                           std::optional<std::complex<double>> alpha0 = {});
[[nodiscard]] RegimeReport validate_regime(const DimensionlessParams& params,
                                           double margin = default_regime_margin,
                                           std::optional<std::complex<double>> alpha0 = {});

/// Throws RegimeError with the report summary when policy is enforce and the
/// report fails.
void require_regime(const RegimeReport& report, RegimePolicy policy, const char* operation);

/// Frame coherent amplitude of a classical oscillation X(t) = X0 cos(Omega t + phi0):
/// alpha0 = sqrt(M Omega / 2 hbar) X(0) + i P(0) / sqrt(2 M hbar Omega).
[[nodiscard]] std::complex<double> coherent_amplitude(const PhysicalConfig& config);

}  // namespace qframe

#endif  // QFRAME_CORE_MODEL_HPP
