#include "qframe/config.hpp"

#include <toml.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qframe {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

const std::array<std::string_view, 5> state_kind_names = {"classical", "coherent", "fock",
                                                         "squeezed", "thermal"};
const std::array<std::string_view, 7> method_names = {
    "closed_form", "husimi", "fock_sum", "appendix_ode", "riccati_exact", "gaussian_ode",
    "proper_time"};

std::string join(const auto& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

using KeySet = std::vector<std::string_view>;

void reject_unknown(const toml::table& table, std::string_view table_name, const KeySet& known) {
  for (auto&& [key, node] : table) {
    if (std::find(known.begin(), known.end(), key.str()) == known.end()) {
      throw ConfigError("unknown key '" + std::string(key.str()) + "' in [" +
                        std::string(table_name) + "]");
    }
  }
}

std::optional<double> get_number(const toml::table& table, std::string_view key,
                                 std::string_view table_name) {
  const toml::node* node = table.get(key);
  if (node == nullptr) return std::nullopt;
  if (auto v = node->value<double>(); v && (node->is_floating_point() || node->is_integer())) {
    return *v;
  }
  throw ConfigError("[" + std::string(table_name) + "] " + std::string(key) + " must be a number");
}

std::optional<bool> get_bool(const toml::table& table, std::string_view key,
                             std::string_view table_name) {
  const toml::node* node = table.get(key);
  if (node == nullptr) return std::nullopt;
  if (auto v = node->value_exact<bool>()) return *v;
  throw ConfigError("[" + std::string(table_name) + "] " + std::string(key) + " must be a boolean");
}

std::optional<std::string> get_string(const toml::table& table, std::string_view key,
                                      std::string_view table_name) {
  const toml::node* node = table.get(key);
  if (node == nullptr) return std::nullopt;
  if (auto v = node->value_exact<std::string>()) return *v;
  throw ConfigError("[" + std::string(table_name) + "] " + std::string(key) + " must be a string");
}

std::vector<double> number_array(const toml::node& node, std::string_view what) {
  const toml::array* arr = node.as_array();
  if (arr == nullptr) throw ConfigError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& item : *arr) {
    auto v = item.value<double>();
    if (!v || !(item.is_floating_point() || item.is_integer())) {
      throw ConfigError(std::string(what) + " must contain only numbers");
    }
    out.push_back(*v);
  }
  return out;
}

const toml::table* sub_table(const toml::table& root, std::string_view name) {
  const toml::node* node = root.get(name);
  if (node == nullptr) return nullptr;
  const toml::table* t = node->as_table();
  if (t == nullptr) throw ConfigError("[" + std::string(name) + "] must be a table");
  return t;
}

PhysicalConfig desk_scale(double epsilon, double rho, double omega_T) {
  PhysicalConfig c;
  c.atom_mass = 1e-27;
  c.frame_mass = c.atom_mass / epsilon;
  c.frame_freq = two_pi * 1e8;
  c.trap_freq = c.frame_freq / rho;
  c.dwell_time = omega_T / c.trap_freq;
  c.traversal_velocity = 1.0;
  c.amplitude = 2.0 * c.frame_zero_point();  // |alpha0| = 1
  return c.resolved();
}

}  // namespace

std::string to_string(StateKind kind) { return std::string(state_kind_names[static_cast<int>(kind)]); }

StateKind parse_state_kind(std::string_view name) {
  for (std::size_t i = 0; i < state_kind_names.size(); ++i) {
    if (state_kind_names[i] == name) return static_cast<StateKind>(i);
  }
  throw ConfigError("unknown state kind '" + std::string(name) + "' (expected one of " +
                    join(state_kind_names) + ")");
}

std::string to_string(Method method) { return std::string(method_names[static_cast<int>(method)]); }

Method parse_method(std::string_view name) {
  for (std::size_t i = 0; i < method_names.size(); ++i) {
    if (method_names[i] == name) return static_cast<Method>(i);
  }
  throw ConfigError("unknown method '" + std::string(name) + "' (expected one of " +
                    join(method_names) + ")");
}

std::vector<Method> parse_method_list(std::string_view text) {
  std::vector<Method> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view item = text.substr(pos, comma - pos);
    if (item.empty()) throw ConfigError("empty entry in method list");
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) != out.end()) {
      throw ConfigError("method '" + std::string(item) + "' listed twice");
    }
    out.push_back(m);
    pos = comma + 1;
  }
  return out;
}

std::string parameter_unit(std::string_view parameter) {
  if (parameter == "X0") return "m";
  if (parameter == "T") return "s";
  if (parameter == "omegaT") return "rad";
  return "1";
}

void SweepSpec::validate() const {
  if (methods.empty()) throw ConfigError("sweep: at least one method is required");
  if (parameter.empty()) return;
  if (std::find(sweep_parameters.begin(), sweep_parameters.end(), parameter) ==
      sweep_parameters.end()) {
    throw ConfigError("sweep: unknown parameter '" + parameter + "' (expected one of " +
                      join(sweep_parameters) + ")");
  }
  if (grid.empty()) throw ConfigError("sweep: grid is empty");
  for (double v : grid) {
    if (!std::isfinite(v)) throw ConfigError("sweep: grid values must be finite");
  }
  if (grid.size() > 1) {
    const bool up = grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1])) {
        throw ConfigError("sweep: grid must be strictly monotone");
      }
    }
  }
}

std::vector<double> make_grid(double start, double stop, std::size_t count, bool logarithmic) {
  if (count == 0) throw ConfigError("sweep: count must be positive");
  if (logarithmic && !(start > 0.0 && stop > 0.0)) {
    throw ConfigError("sweep: log spacing needs positive start and stop");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = start;
    return grid;
  }
  const double a = logarithmic ? std::log(start) : start;
  const double b = logarithmic ? std::log(stop) : stop;
  for (std::size_t i = 0; i < count; ++i) {
    const double n = static_cast<double>(count - 1), k = static_cast<double>(i);
    // weighted form keeps integer grids exact
    const double v = i + 1 == count ? b : (a * (n - k) + b * k) / n;
    grid[i] = logarithmic ? std::exp(v) : v;
  }
  grid.front() = start;
  grid.back() = stop;
  return grid;
}

std::vector<std::string> preset_names() {
  return {"paper-main", "superfluid-sec4", "desk-scale-a", "desk-scale-b"};
}

SuperfluidGeometry superfluid_geometry() { return {}; }

RunConfig default_run_config() { return preset("paper-main"); }

RunConfig preset(std::string_view name) {
  RunConfig run;
  run.name = std::string(name);
  if (name == "paper-main" || name == "superfluid-sec4") {
    PhysicalConfig c;
    c.atom_mass = name == "paper-main" ? 1e-27 : 6.646e-27;  // 4He for the superfluid case
    c.frame_mass = 1e-15;
    c.frame_freq = two_pi * 1e8;
    c.trap_freq = two_pi * 1e10;
    c.amplitude = 1e-9;
    c.initial_phase = 0.0;
    c.wire_length = 1e-6;
    c.traversal_velocity = 1.0;
    run.physical = c.resolved();
    run.state.kind = StateKind::classical;
  } else if (name == "desk-scale-a") {
    run.physical = desk_scale(1e-3, 1e-2, 1e5);
    run.state.kind = StateKind::coherent;
  } else if (name == "desk-scale-b") {
    run.physical = desk_scale(1e-4, 1e-1, 1e4);
    run.state.kind = StateKind::coherent;
  } else {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (available: " + names + ")");
  }
  return run;
}

RunConfig parse_config(std::string_view toml_text, const RunConfig& base, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
        << e.description();
    throw ConfigError(msg.str());
  }
  reject_unknown(root, "root", {"atom", "frame", "state", "sweep", "numerics"});

  RunConfig out = base;
  out.name = std::string(source);
  PhysicalConfig& c = out.physical;
  std::optional<double> wire_length, velocity, dwell_time;

  if (const auto* t = sub_table(root, "atom")) {
    reject_unknown(*t, "atom", {"mass", "trap_freq", "velocity"});
    if (auto v = get_number(*t, "mass", "atom")) c.atom_mass = *v;
    if (auto v = get_number(*t, "trap_freq", "atom")) c.trap_freq = *v;
    velocity = get_number(*t, "velocity", "atom");
  }
  if (const auto* t = sub_table(root, "frame")) {
    reject_unknown(*t, "frame", {"mass", "freq", "amplitude", "initial_phase", "wire_length",
                                 "dwell_time"});
    if (auto v = get_number(*t, "mass", "frame")) c.frame_mass = *v;
    if (auto v = get_number(*t, "freq", "frame")) c.frame_freq = *v;
    if (auto v = get_number(*t, "amplitude", "frame")) c.amplitude = *v;
    if (auto v = get_number(*t, "initial_phase", "frame")) c.initial_phase = *v;
    wire_length = get_number(*t, "wire_length", "frame");
    dwell_time = get_number(*t, "dwell_time", "frame");
  }
  if (wire_length || velocity || dwell_time) {
    c.wire_length = wire_length.value_or(0.0);
    c.traversal_velocity = velocity.value_or(0.0);
    c.dwell_time = dwell_time.value_or(0.0);
  }

  if (const auto* t = sub_table(root, "state")) {
    reject_unknown(*t, "state", {"kind", "alpha", "number", "r", "theta", "beta"});
    StateSpec& s = out.state;
    if (auto v = get_string(*t, "kind", "state")) s.kind = parse_state_kind(*v);
    if (const toml::node* a = t->get("alpha")) {
      if (a->is_array()) {
        const auto parts = number_array(*a, "[state] alpha");
        if (parts.size() != 2) throw ConfigError("[state] alpha must be [re, im] or a number");
        s.alpha = std::complex<double>(parts[0], parts[1]);
      } else {
        s.alpha = std::complex<double>(*get_number(*t, "alpha", "state"), 0.0);
      }
    }
    if (const toml::node* n = t->get("number")) {
      auto v = n->value_exact<int64_t>();
      if (!v || *v < 0 || *v > 100'000'000) {
        throw ConfigError("[state] number must be a non-negative integer");
      }
      s.number = static_cast<unsigned>(*v);
    }
    if (auto v = get_number(*t, "r", "state")) s.r = *v;
    if (auto v = get_number(*t, "theta", "state")) s.theta = *v;
    if (auto v = get_number(*t, "beta", "state")) s.beta_hbar_omega = *v;
  }

  if (const auto* t = sub_table(root, "sweep")) {
    reject_unknown(*t, "sweep",
                   {"parameter", "values", "start", "stop", "count", "spacing", "methods"});
    SweepSpec& sw = out.sweep;
    if (auto v = get_string(*t, "parameter", "sweep")) sw.parameter = *v;
    const bool has_range = t->contains("start") || t->contains("stop") || t->contains("count");
    if (const toml::node* v = t->get("values")) {
      if (has_range) throw ConfigError("[sweep] give either values or start/stop/count");
      sw.grid = number_array(*v, "[sweep] values");
    } else if (has_range) {
      const auto start = get_number(*t, "start", "sweep");
      const auto stop = get_number(*t, "stop", "sweep");
      const toml::node* count = t->get("count");
      if (!start || !stop || count == nullptr || !count->value_exact<int64_t>()) {
        throw ConfigError("[sweep] start, stop and integer count are all required");
      }
      const auto n = *count->value_exact<int64_t>();
      if (n <= 0 || n > 10'000'000) throw ConfigError("[sweep] count out of range");
      const std::string spacing = get_string(*t, "spacing", "sweep").value_or("linear");
      if (spacing != "linear" && spacing != "log") {
        throw ConfigError("[sweep] spacing must be \"linear\" or \"log\"");
      }
      sw.grid = make_grid(*start, *stop, static_cast<std::size_t>(n), spacing == "log");
    }
    if (const toml::node* m = t->get("methods")) {
      const toml::array* arr = m->as_array();
      if (arr == nullptr) throw ConfigError("[sweep] methods must be an array of strings");
      std::string joined;
      for (const auto& item : *arr) {
        auto name = item.value_exact<std::string>();
        if (!name) throw ConfigError("[sweep] methods must be an array of strings");
        joined += (joined.empty() ? "" : ",") + *name;
      }
      sw.methods = parse_method_list(joined);
    }
  }

  if (const auto* t = sub_table(root, "numerics")) {
    reject_unknown(*t, "numerics", {"ode_tol", "quad_tol", "fock_tail", "regime_margin",
                                    "allow_out_of_regime"});
    Numerics& n = out.numerics;
    if (auto v = get_number(*t, "ode_tol", "numerics")) n.ode_tol = *v;
    if (auto v = get_number(*t, "quad_tol", "numerics")) n.quad_tol = *v;
    if (auto v = get_number(*t, "fock_tail", "numerics")) n.fock_tail = *v;
    if (auto v = get_number(*t, "regime_margin", "numerics")) n.regime_margin = *v;
    if (auto v = get_bool(*t, "allow_out_of_regime", "numerics")) n.allow_out_of_regime = *v;
  }

  const Numerics& n = out.numerics;
  if (!(n.ode_tol > 0.0) || !(n.quad_tol > 0.0) || !(n.fock_tail > 0.0 && n.fock_tail < 1.0)) {
    throw ConfigError("[numerics] tolerances must be positive (fock_tail below 1)");
  }
  if (!(n.regime_margin > 1.0)) throw ConfigError("[numerics] regime_margin must exceed 1");
  out.physical = out.physical.resolved();
  out.sweep.validate();
  return out;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), base, path);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string to_toml(const RunConfig& config) {
  const PhysicalConfig& c = config.physical;
  auto f = format_double;
  std::ostringstream out;
  out << "[atom]\n"
      << "mass = " << f(c.atom_mass) << "\n"
      << "trap_freq = " << f(c.trap_freq) << "\n"
      << "velocity = " << f(c.traversal_velocity) << "\n\n"
      << "[frame]\n"
      << "mass = " << f(c.frame_mass) << "\n"
      << "freq = " << f(c.frame_freq) << "\n"
      << "amplitude = " << f(c.amplitude) << "\n"
      << "initial_phase = " << f(c.initial_phase) << "\n"
      << "wire_length = " << f(c.wire_length) << "\n"
      << "dwell_time = " << f(c.dwell_time) << "\n\n";
  const StateSpec& s = config.state;
  out << "[state]\n"
      << "kind = \"" << to_string(s.kind) << "\"\n";
  if (s.alpha) out << "alpha = [" << f(s.alpha->real()) << ", " << f(s.alpha->imag()) << "]\n";
  out << "number = " << s.number << "\n"
      << "r = " << f(s.r) << "\n"
      << "theta = " << f(s.theta) << "\n"
      << "beta = " << f(s.beta_hbar_omega) << "\n\n";
  const SweepSpec& sw = config.sweep;
  out << "[sweep]\n";
  if (!sw.parameter.empty()) {
    out << "parameter = \"" << sw.parameter << "\"\nvalues = [";
    for (std::size_t i = 0; i < sw.grid.size(); ++i) out << (i ? ", " : "") << f(sw.grid[i]);
    out << "]\n";
  }
  out << "methods = [";
  for (std::size_t i = 0; i < sw.methods.size(); ++i) {
    out << (i ? ", " : "") << '"' << to_string(sw.methods[i]) << '"';
  }
  out << "]\n\n";
  const Numerics& n = config.numerics;
  out << "[numerics]\n"
      << "ode_tol = " << f(n.ode_tol) << "\n"
      << "quad_tol = " << f(n.quad_tol) << "\n"
      << "fock_tail = " << f(n.fock_tail) << "\n"
      << "regime_margin = " << f(n.regime_margin) << "\n"
      << "allow_out_of_regime = " << (n.allow_out_of_regime ? "true" : "false") << "\n";
  return out.str();
}

RunConfig apply_parameter(const RunConfig& config, std::string_view parameter, double value) {
  RunConfig out = config;
  PhysicalConfig& c = out.physical;
  auto set_dwell = [&c](double T) {
    c.dwell_time = T;
    c.wire_length = c.traversal_velocity > 0.0 ? c.traversal_velocity * T : 0.0;
  };
  if (parameter == "X0") {
    c.amplitude = value;
  } else if (parameter == "r") {
    out.state.r = value;
  } else if (parameter == "beta") {
    out.state.beta_hbar_omega = value;
  } else if (parameter == "T") {
    set_dwell(value);
  } else if (parameter == "N") {
    if (value < 0.0 || value != std::floor(value) || value > 1e8) {
      throw ConfigError("sweep: N values must be non-negative integers");
    }
    out.state.number = static_cast<unsigned>(value);
  } else if (parameter == "alpha0") {
    out.state.alpha = std::complex<double>(value, 0.0);
  } else if (parameter == "epsilon") {
    if (!(value > 0.0)) throw ConfigError("sweep: epsilon must be positive");
    c.frame_mass = c.atom_mass / value;
  } else if (parameter == "rho") {
    if (!(value > 0.0)) throw ConfigError("sweep: rho must be positive");
    c.trap_freq = c.frame_freq / value;
  } else if (parameter == "omegaT") {
    set_dwell(value / c.trap_freq);
  } else if (!parameter.empty()) {
    throw ConfigError("sweep: unknown parameter '" + std::string(parameter) + "'");
  }
  out.physical = c.resolved();
  return out;
}

FrameState make_frame_state(const StateSpec& spec, const PhysicalConfig& physical) {
  switch (spec.kind) {
    case StateKind::coherent:
      return CoherentState{spec.alpha.value_or(coherent_amplitude(physical))};
    case StateKind::fock: return FockState{spec.number};
    case StateKind::squeezed:
      if (!std::isfinite(spec.r) || spec.r < 0.0) throw ConfigError("squeeze r must be >= 0");
      return SqueezedVacuum{spec.r, spec.theta};
    case StateKind::thermal:
      if (!(spec.beta_hbar_omega > 0.0) || !std::isfinite(spec.beta_hbar_omega)) {
        throw ConfigError("thermal beta*hbar*Omega must be positive");
      }
      return ThermalState{spec.beta_hbar_omega};
    case StateKind::classical: break;
  }
  throw ConfigError("classical runs have no quantum frame state");
}

std::string config_hash(const RunConfig& config) {
  RunConfig canonical = config;
  canonical.name.clear();
  const std::string text = to_toml(canonical);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf.data(), 16);
}

}  // namespace qframe
