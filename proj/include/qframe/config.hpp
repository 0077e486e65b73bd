#ifndef QFRAME_CONFIG_HPP
#define QFRAME_CONFIG_HPP

#include "qframe/core_model.hpp"
#include "qframe/frame_state.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qframe {

enum class StateKind { classical, coherent, fock, squeezed, thermal };

[[nodiscard]] std::string to_string(StateKind kind);
[[nodiscard]] StateKind parse_state_kind(std::string_view name);

/// Frame state as configured. A coherent state without an explicit amplitude
/// takes alpha0 from the frame oscillation (X0, phi0).
struct StateSpec {
  StateKind kind = StateKind::classical;
  std::optional<std::complex<double>> alpha;
  unsigned number = 0;
  double r = 0.0;
  double theta = 0.0;
  double beta_hbar_omega = 1.0;
};

enum class Method {
  closed_form,
  husimi,
  fock_sum,
  appendix_ode,
  riccati_exact,
  gaussian_ode,
  proper_time,
};

[[nodiscard]] std::string to_string(Method method);
[[nodiscard]] Method parse_method(std::string_view name);
[[nodiscard]] std::vector<Method> parse_method_list(std::string_view comma_separated);

struct Numerics {
  double ode_tol = 1e-10;
  double quad_tol = 1e-9;
  double fock_tail = 1e-12;
  double regime_margin = default_regime_margin;
  bool allow_out_of_regime = false;
};

inline const std::vector<std::string> sweep_parameters = {
    "X0", "r", "beta", "T", "N", "alpha0", "epsilon", "rho", "omegaT"};

/// Unit annotation for a swept parameter ("1" for dimensionless groups).
[[nodiscard]] std::string parameter_unit(std::string_view parameter);

struct SweepSpec {
  std::string parameter;          // empty = single point
  std::vector<double> grid;
  std::vector<Method> methods{Method::closed_form};

  /// Strictly monotone, non-empty grid and a known parameter.
  void validate() const;
};

/// Linear or logarithmic grid with `count` points including both ends.
[[nodiscard]] std::vector<double> make_grid(double start, double stop, std::size_t count,
                                            bool logarithmic);

struct RunConfig {
  std::string name;  // preset or file the run was built from
  PhysicalConfig physical;
  StateSpec state;
  SweepSpec sweep;
  Numerics numerics;
};

/// Experimental geometry attached to the superfluid preset.
struct SuperfluidGeometry {
  double channel_width = 250e-9;   // m
  double channel_length = 1e-6;    // m
  double aperture = 100e-9;        // m
  double sound_speed = 240.0;      // c_He [m/s]
  double frame_frequency = 1e8;    // f [Hz]
  [[nodiscard]] double acoustic_wavelength() const { return sound_speed / frame_frequency; }
};

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError listing the available names.
[[nodiscard]] RunConfig preset(std::string_view name);
[[nodiscard]] SuperfluidGeometry superfluid_geometry();

/// Overlays a TOML document on `base`. Tables: [atom], [frame], [state],
/// [sweep], [numerics]; unknown keys are errors. If any of wire_length,
/// velocity or dwell_time is given, the base values of the other two are
/// discarded unless also given, and the missing one is derived.
[[nodiscard]] RunConfig parse_config(std::string_view toml_text, const RunConfig& base,
                                     std::string_view source = "config");
[[nodiscard]] RunConfig load_config(const std::string& path, const RunConfig& base);

/// Empty run config: paper-main physics, classical state.
[[nodiscard]] RunConfig default_run_config();

/// TOML rendering that parse_config reads back to an identical config.
[[nodiscard]] std::string to_toml(const RunConfig& config);

/// Applies one swept value; returns the resolved config for that point.
[[nodiscard]] RunConfig apply_parameter(const RunConfig& config, std::string_view parameter,
                                        double value);

[[nodiscard]] FrameState make_frame_state(const StateSpec& spec, const PhysicalConfig& physical);

/// Shortest round-trip decimal rendering.
[[nodiscard]] std::string format_double(double value);

/// 64-bit FNV-1a of the canonical rendering, as 16 hex digits. Thread count
/// and output options are not part of the configuration.
[[nodiscard]] std::string config_hash(const RunConfig& config);

}  // namespace qframe

#endif  // QFRAME_CONFIG_HPP
