#include "qframe/core_model.hpp"

#include <cmath>
#include <sstream>

namespace qframe {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ConfigError(std::string(name) + " must be finite and strictly positive");
  }
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw ConfigError(std::string(name) + " must be finite");
}

RegimeCheck much_less(std::string name, double small, double large, double margin) {
  // small == 0 makes the ratio infinite, which trivially passes
  const bool ok = small <= 0.0 ? true : (large / small >= margin);
  return {std::move(name), small, large, ok};
}

}  // namespace

PhysicalConfig PhysicalConfig::resolved() const {
  PhysicalConfig out = *this;
  if (out.wire_length > 0.0 && out.traversal_velocity > 0.0) {
    const double implied_T = out.wire_length / out.traversal_velocity;
    if (out.dwell_time <= 0.0) out.dwell_time = implied_T;
  } else if (out.wire_length > 0.0 && out.dwell_time > 0.0) {
    out.traversal_velocity = out.wire_length / out.dwell_time;
  } else if (out.traversal_velocity > 0.0 && out.dwell_time > 0.0) {
    out.wire_length = out.traversal_velocity * out.dwell_time;
  }
  out.validate();
  return out;
}

void PhysicalConfig::validate() const {
  require_positive(atom_mass, "atom_mass");
  require_positive(frame_mass, "frame_mass");
  require_positive(trap_freq, "trap_freq");
  require_positive(frame_freq, "frame_freq");
  require_positive(dwell_time, "dwell_time");
  require_positive(hbar, "hbar");
  require_positive(light_speed, "light_speed");
  require_finite(amplitude, "amplitude");
  require_finite(initial_phase, "initial_phase");
  if (amplitude < 0.0) throw ConfigError("amplitude must be non-negative");
  require_finite(wire_length, "wire_length");
  require_finite(traversal_velocity, "traversal_velocity");
  if (wire_length > 0.0 && traversal_velocity > 0.0) {
    const double mismatch = std::abs(traversal_velocity * dwell_time - wire_length);
    if (mismatch > 1e-12 * wire_length) {
      throw ConfigError("inconsistent traversal: v*T must equal L");
    }
  }
}

double PhysicalConfig::frame_zero_point() const {
  return std::sqrt(hbar / (2.0 * frame_mass * frame_freq));
}

double PhysicalConfig::atom_zero_point() const {
  return std::sqrt(hbar / (2.0 * atom_mass * trap_freq));
}

DimensionlessParams DimensionlessParams::from_groups(double epsilon, double rho,
                                                     double omega_T,
                                                     double scaled_amplitude) {
  DimensionlessParams p;
  p.mass_ratio = epsilon;
  p.freq_ratio = rho;
  p.dwell_angle = omega_T;
  p.drive_angle = rho * omega_T;
  p.scaled_amplitude = scaled_amplitude;
  p.back_action = epsilon * p.drive_angle / 4.0;
  p.validate();
  return p;
}

void DimensionlessParams::validate() const {
  if (!std::isfinite(mass_ratio) || mass_ratio < 0.0) {
    throw ConfigError("mass_ratio must be finite and non-negative");
  }
  require_positive(freq_ratio, "freq_ratio");
  require_positive(dwell_angle, "dwell_angle");
  require_positive(drive_angle, "drive_angle");
  require_finite(scaled_amplitude, "scaled_amplitude");
  require_finite(back_action, "back_action");
}

DimensionlessParams to_dimensionless(const PhysicalConfig& config) {
  config.validate();
  DimensionlessParams p;
  p.mass_ratio = config.atom_mass / config.frame_mass;
  p.freq_ratio = config.frame_freq / config.trap_freq;
  p.dwell_angle = config.trap_freq * config.dwell_time;
  p.drive_angle = config.frame_freq * config.dwell_time;
  p.scaled_amplitude = config.amplitude / config.frame_zero_point();
  p.back_action = p.mass_ratio * p.drive_angle / 4.0;
  return p;
}

std::string RegimeReport::summary() const {
  std::ostringstream os;
  os << (regime_ok ? "regime ok" : "regime violated");
  for (const auto& c : checks) {
    if (!c.satisfied) os << "; " << c.name << " fails (" << c.lhs << " vs " << c.rhs << ")";
  }
  return os.str();
}

RegimeReport validate_regime(const DimensionlessParams& params, double margin,
                             std::optional<std::complex<double>> alpha0) {
  if (!(margin > 1.0)) throw ConfigError("regime margin must exceed 1");
  RegimeReport report;
  // Ratios are expressed relative to omega, which cancels in each comparison.
  report.checks.push_back(much_less("pi/T << Omega", constants::pi,
                                    params.drive_angle, margin));
  report.checks.push_back(much_less("Omega << omega", params.freq_ratio, 1.0, margin));
  report.checks.push_back(much_less("m << M", params.mass_ratio, 1.0, margin));
  report.checks.push_back(much_less("m Omega T/(4M) << 1", params.back_action, 1.0, margin));
  if (alpha0) {
    const double k = params.back_action;
    report.checks.push_back(
        much_less("|alpha0|^2 kappa^2 << 1", std::norm(*alpha0) * k * k, 1.0, margin));
  }
  for (const auto& c : report.checks) report.regime_ok = report.regime_ok && c.satisfied;
  return report;
}

RegimeReport validate_regime(const PhysicalConfig& config, double margin,
                             std::optional<std::complex<double>> alpha0) {
  return validate_regime(to_dimensionless(config), margin, alpha0);
}

void require_regime(const RegimeReport& report, RegimePolicy policy, const char* operation) {
  if (policy == RegimePolicy::enforce && !report.regime_ok) {
    throw RegimeError(std::string(operation) + ": " + report.summary());
  }
}

std::complex<double> coherent_amplitude(const PhysicalConfig& config) {
  const double x0 = config.amplitude * std::cos(config.initial_phase);
  const double p0 = -config.frame_mass * config.frame_freq * config.amplitude *
                    std::sin(config.initial_phase);
  const double mo = config.frame_mass * config.frame_freq;
  return {std::sqrt(mo / (2.0 * config.hbar)) * x0, p0 / std::sqrt(2.0 * mo * config.hbar)};
}

}  // namespace qframe
