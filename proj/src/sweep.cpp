#include "qframe/sweep.hpp"

#include "qframe/classical_frame.hpp"
#include "qframe/full_dynamics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace qframe {

namespace {

using Complex = std::complex<double>;
using ordered_json = nlohmann::ordered_json;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double wrap_phase(double x) {
  const double w = std::remainder(x, 2.0 * std::numbers::pi);
  return w <= -std::numbers::pi ? w + 2.0 * std::numbers::pi : w;
}

bool is_classical_method(Method m) {
  return m == Method::gaussian_ode || m == Method::proper_time;
}

MethodOutcome from_interference(Method m, const InterferenceResult& r) {
  MethodOutcome o;
  o.method = m;
  o.ok = true;
  o.factor = r.factor;
  o.visibility = r.visibility;
  o.phase = wrap_phase(r.phase);
  o.unwrapped_phase = r.unwrapped_phase;
  return o;
}

MethodOutcome from_phase(Method m, double phase, double visibility) {
  MethodOutcome o;
  o.method = m;
  o.ok = true;
  o.factor = std::polar(visibility, phase);
  o.visibility = visibility;
  o.phase = wrap_phase(phase);
  o.unwrapped_phase = phase;
  return o;
}

MethodOutcome failed(Method m, std::string message) {
  MethodOutcome o;
  o.method = m;
  o.ok = false;
  o.error = std::move(message);
  o.visibility = o.phase = o.unwrapped_phase = nan;
  o.factor = {nan, nan};
  return o;
}

InterferenceResult run_quantum(Method m, const FrameState& state, const DimensionlessParams& p,
                               const Numerics& n) {
  switch (m) {
    case Method::closed_form: return averaged_phase_closed(state, p);
    case Method::husimi: {
      QuadratureSpec quad;
      quad.tolerance = n.quad_tol;
      return averaged_phase_husimi(state, BackActionPhases::from(p), quad);
    }
    case Method::fock_sum: {
      const unsigned n_max = truncation_for_tail(state, n.fock_tail);
      return averaged_phase_fock_sum(state, BackActionPhases::from(p), n_max, n.fock_tail).result;
    }
    case Method::appendix_ode: return averaged_phase_appendix(state, p, n.ode_tol).result;
    case Method::riccati_exact: return averaged_phase_riccati(state, p, n.ode_tol, n.fock_tail);
    case Method::gaussian_ode:
    case Method::proper_time: break;
  }
  throw ConfigError("method " + to_string(m) + " applies to classical runs only");
}

MethodOutcome guarded(Method m, auto&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return failed(m, e.what());
  } catch (...) {
    return failed(m, "unknown failure");
  }
}

MethodOutcome evaluate_classical(Method m, const RunConfig& point) {
  const PhysicalConfig& c = point.physical;
  switch (m) {
    case Method::closed_form: {
      const auto r = classical_phase(c, RegimePolicy::allow);
      return from_phase(m, r.phase, r.visibility);
    }
    case Method::gaussian_ode: {
      const auto r = classical_gaussian_propagate(c, point.numerics.ode_tol, RegimePolicy::allow, 2);
      return from_phase(m, r.result.phase, r.result.visibility);
    }
    case Method::proper_time: {
      const double periods = c.frame_freq * c.dwell_time / (2.0 * std::numbers::pi);
      const auto points = static_cast<std::size_t>(std::max(640.0, 64.0 * std::ceil(periods)));
      return from_phase(m, proper_time_phase(c, points), 1.0);
    }
    default:
      throw ConfigError("method " + to_string(m) + " needs a quantum frame state");
  }
}

std::vector<double> pairwise_deviation(const std::vector<MethodOutcome>& outcomes) {
  std::vector<double> out;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
      out.push_back(outcomes[i].ok && outcomes[j].ok
                        ? std::abs(outcomes[i].factor - outcomes[j].factor)
                        : nan);
    }
  }
  return out;
}

RegimeReport point_regime(const RunConfig& point) {
  std::optional<Complex> alpha;
  if (point.state.kind == StateKind::coherent) {
    alpha = point.state.alpha.value_or(coherent_amplitude(point.physical));
  }
  return validate_regime(point.physical, point.numerics.regime_margin, alpha);
}

/// Runs body(i) for i in [0, count) on `threads` workers; results are
/// written by index so ordering never depends on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string number_or_empty(double v) { return std::isnan(v) ? std::string() : format_double(v); }

ordered_json number_or_null(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

std::vector<std::string> pair_names(const std::vector<Method>& methods) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      out.push_back(to_string(methods[i]) + "-" + to_string(methods[j]));
    }
  }
  return out;
}

}  // namespace

SweepRow evaluate_point(const RunConfig& point) {
  SweepRow row;
  const RegimeReport regime = point_regime(point);
  row.regime_ok = regime.regime_ok;
  if (!regime.regime_ok) row.regime_summary = regime.summary();
  row.config_hash = config_hash(point);

  const bool classical = point.state.kind == StateKind::classical;
  std::optional<FrameState> state;
  if (!classical) state = make_frame_state(point.state, point.physical);
  const DimensionlessParams params = to_dimensionless(point.physical);

  for (Method m : point.sweep.methods) {
    row.outcomes.push_back(guarded(m, [&] {
      if (classical) return evaluate_classical(m, point);
      return from_interference(m, run_quantum(m, *state, params, point.numerics));
    }));
  }
  row.pairwise = pairwise_deviation(row.outcomes);
  return row;
}

unsigned resolve_thread_count(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("QFRAME_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<unsigned>(v);
    throw ConfigError("QFRAME_THREADS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepTable run_sweep(const RunConfig& config, unsigned threads) {
  config.sweep.validate();
  for (Method m : config.sweep.methods) {
    if (config.state.kind != StateKind::classical && is_classical_method(m)) {
      throw ConfigError("method " + to_string(m) + " applies to classical runs only");
    }
    if (config.state.kind == StateKind::classical && !is_classical_method(m) &&
        m != Method::closed_form) {
      throw ConfigError("method " + to_string(m) + " needs a quantum frame state");
    }
  }

  std::vector<double> grid = config.sweep.grid;
  if (config.sweep.parameter.empty()) grid = {0.0};
  std::vector<RunConfig> points;
  points.reserve(grid.size());
  for (double v : grid) {
    points.push_back(config.sweep.parameter.empty()
                         ? apply_parameter(config, "", 0.0)
                         : apply_parameter(config, config.sweep.parameter, v));
    if (config.state.kind != StateKind::classical) {
      (void)make_frame_state(points.back().state, points.back().physical);
    }
  }
  if (!config.numerics.allow_out_of_regime) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto report = point_regime(points[i]);
      if (!report.regime_ok) {
        throw RegimeError("point " + std::to_string(i) + " out of regime: " + report.summary());
      }
    }
  }

  SweepTable table;
  table.parameter = config.sweep.parameter;
  table.unit = parameter_unit(table.parameter);
  table.methods = config.sweep.methods;
  table.config_hash = config_hash(config);
  table.rows.resize(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    table.rows[i] = evaluate_point(points[i]);
    table.rows[i].value = grid[i];
  });

  // unwrap each method's phase along grid order
  for (std::size_t k = 0; k < table.methods.size(); ++k) {
    double previous = nan;
    for (auto& row : table.rows) {
      auto& o = row.outcomes[k];
      if (!o.ok) continue;
      if (!std::isnan(previous)) {
        o.unwrapped_phase = previous + std::remainder(o.phase - previous, 2.0 * std::numbers::pi);
      }
      previous = o.unwrapped_phase;
    }
  }
  return table;
}

bool has_total_failure(const SweepTable& table) {
  return std::any_of(table.rows.begin(), table.rows.end(), [](const SweepRow& row) {
    return std::none_of(row.outcomes.begin(), row.outcomes.end(),
                        [](const MethodOutcome& o) { return o.ok; });
  });
}

void write_csv(std::ostream& out, const SweepTable& table) {
  const char* eol = "\r\n";
  std::vector<std::string> header{"index"};
  if (!table.parameter.empty()) header.push_back(table.parameter + "[" + table.unit + "]");
  header.emplace_back("regime_ok");
  for (Method m : table.methods) {
    const std::string n = to_string(m);
    header.push_back(n + ".visibility[1]");
    header.push_back(n + ".phase[rad]");
    header.push_back(n + ".phase_unwrapped[rad]");
    header.push_back(n + ".status");
  }
  for (const auto& pair : pair_names(table.methods)) header.push_back("absdiff." + pair + "[1]");
  header.emplace_back("config_hash");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
  out << eol;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const SweepRow& row = table.rows[r];
    std::vector<std::string> f{std::to_string(r)};
    if (!table.parameter.empty()) f.push_back(format_double(row.value));
    f.emplace_back(row.regime_ok ? "true" : "false");
    for (const auto& o : row.outcomes) {
      f.push_back(number_or_empty(o.visibility));
      f.push_back(number_or_empty(o.phase));
      f.push_back(number_or_empty(o.unwrapped_phase));
      f.push_back(o.ok ? "ok" : "error: " + o.error);
    }
    for (double d : row.pairwise) f.push_back(number_or_empty(d));
    f.push_back(row.config_hash);
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << csv_field(f[i]);
    out << eol;
  }
}

void write_json(std::ostream& out, const SweepTable& table) {
  ordered_json doc;
  doc["schema_version"] = "1";
  doc["config_hash"] = table.config_hash;
  doc["parameter"] = table.parameter.empty() ? ordered_json(nullptr) : ordered_json(table.parameter);
  doc["unit"] = table.unit;
  ordered_json methods = ordered_json::array();
  for (Method m : table.methods) methods.push_back(to_string(m));
  doc["methods"] = methods;
  const auto pairs = pair_names(table.methods);
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const SweepRow& row = table.rows[r];
    ordered_json j;
    j["index"] = r;
    j["value"] = table.parameter.empty() ? ordered_json(nullptr) : number_or_null(row.value);
    j["regime_ok"] = row.regime_ok;
    if (!row.regime_ok) j["regime_summary"] = row.regime_summary;
    ordered_json results;
    for (const auto& o : row.outcomes) {
      ordered_json res;
      res["ok"] = o.ok;
      res["visibility"] = number_or_null(o.visibility);
      res["phase_rad"] = number_or_null(o.phase);
      res["phase_unwrapped_rad"] = number_or_null(o.unwrapped_phase);
      if (!o.ok) res["error"] = o.error;
      results[to_string(o.method)] = res;
    }
    j["results"] = results;
    ordered_json pairwise = ordered_json::object();
    for (std::size_t k = 0; k < pairs.size(); ++k) pairwise[pairs[k]] = number_or_null(row.pairwise[k]);
    j["absdiff"] = pairwise;
    j["config_hash"] = row.config_hash;
    rows.push_back(j);
  }
  doc["rows"] = rows;
  out << doc.dump(2) << "\n";
}

std::vector<ComparePoint> default_compare_points() {
  std::vector<ComparePoint> pts{{0.0, 1e-1, 1e3}};
  for (double e : {1e-4, 1e-3}) {
    for (double r : {1e-2, 1e-1}) {
      for (double w : {1e4, 1e5}) pts.push_back({e, r, w});
    }
  }
  return pts;
}

CompareReport compare_report(const RunConfig& config, const std::vector<ComparePoint>& points,
                             unsigned threads) {
  if (config.state.kind == StateKind::classical) {
    throw ConfigError("compare needs a quantum frame state ([state] kind)");
  }
  std::vector<Method> methods{Method::closed_form};
  for (Method m : config.sweep.methods) {
    if (is_classical_method(m)) throw ConfigError("compare: " + to_string(m) + " is classical-only");
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
  }
  if (methods.size() == 1) {
    methods = {Method::closed_form, Method::husimi, Method::fock_sum, Method::appendix_ode,
               Method::riccati_exact};
  }
  const FrameState state = make_frame_state(config.state, config.physical);

  CompareReport report;
  report.state = to_string(config.state.kind);
  report.config_hash = config_hash(config);
  report.points.resize(points.size());

  parallel_for(points.size(), threads, [&](std::size_t i) {
    ComparePointResult& res = report.points[i];
    res.point = points[i];
    const auto p = DimensionlessParams::from_groups(points[i].epsilon, points[i].rho, points[i].omega_T);
    Numerics numerics = config.numerics;
    // the decoupled rows carry a 1e-10 budget, below the default integration error
    if (points[i].epsilon == 0.0) numerics.ode_tol = std::min(numerics.ode_tol, 1e-12);
    for (Method m : methods) {
      res.outcomes.push_back(guarded(m, [&] {
        return from_interference(m, run_quantum(m, state, p, numerics));
      }));
    }
    const MethodOutcome& closed = res.outcomes.front();
    auto find = [&](Method m) -> const MethodOutcome* {
      for (const auto& o : res.outcomes) {
        if (o.method == m) return &o;
      }
      return nullptr;
    };
    for (const auto& o : res.outcomes) {
      if (!o.ok) res.checks.push_back({to_string(o.method) + " failed: " + o.error, nan, 0.0, false});
    }
    auto add = [&](const std::string& name, const MethodOutcome* a, const MethodOutcome* b,
                   double budget, bool relative) {
      if (a == nullptr || b == nullptr || !a->ok || !b->ok) return;
      double d = std::abs(a->factor - b->factor);
      if (relative) d /= std::abs(b->factor);
      res.checks.push_back({name, d, budget, budget <= 0.0 || d <= budget});
    };
    if (points[i].epsilon == 0.0) {
      for (const auto& o : res.outcomes) {
        if (o.method != Method::closed_form) {
          add(to_string(o.method) + " vs closed_form", &o, &closed, 1e-10, false);
        }
      }
    } else {
      add("appendix_ode vs closed_form (relative)", find(Method::appendix_ode), &closed, 1e-2, true);
      add("husimi vs closed_form", find(Method::husimi), &closed, 1e-6, false);
      add("fock_sum vs closed_form", find(Method::fock_sum), &closed, 1e-6, false);
      add("riccati_exact vs appendix_ode", find(Method::riccati_exact), find(Method::appendix_ode),
          0.0, false);
      add("riccati_exact vs closed_form", find(Method::riccati_exact), &closed, 0.0, false);
    }
    res.passed = std::all_of(res.checks.begin(), res.checks.end(),
                             [](const CompareCheck& c) { return c.passed; });
  });

  // All four named states reduce to the frame vacuum at these settings.
  const auto vac_params = DimensionlessParams::from_groups(1e-3, 1e-2, 1e5);
  const std::vector<FrameState> vacua{CoherentState{0.0}, FockState{0}, SqueezedVacuum{0.0, 0.0},
                                      ThermalState{50.0}};
  double spread = 0.0;
  const Complex ref = averaged_phase_closed(vacua.front(), vac_params).factor;
  for (const auto& v : vacua) {
    spread = std::max(spread, std::abs(averaged_phase_closed(v, vac_params).factor - ref));
  }
  report.vacuum_degeneracy = {"vacuum degeneracy (coherent 0, Fock 0, squeezed 0, thermal 50)",
                              spread, 1e-10, spread <= 1e-10};
  report.passed = report.vacuum_degeneracy.passed &&
                  std::all_of(report.points.begin(), report.points.end(),
                              [](const ComparePointResult& r) { return r.passed; });
  return report;
}

void write_compare_json(std::ostream& out, const CompareReport& report) {
  ordered_json doc;
  doc["schema_version"] = "1";
  doc["config_hash"] = report.config_hash;
  doc["state"] = report.state;
  doc["passed"] = report.passed;
  auto check_json = [](const CompareCheck& c) {
    ordered_json j;
    j["name"] = c.name;
    j["deviation"] = number_or_null(c.deviation);
    j["budget"] = c.budget > 0.0 ? ordered_json(c.budget) : ordered_json(nullptr);
    j["passed"] = c.passed;
    return j;
  };
  doc["vacuum_degeneracy"] = check_json(report.vacuum_degeneracy);
  ordered_json pts = ordered_json::array();
  for (const auto& r : report.points) {
    ordered_json j;
    j["epsilon"] = r.point.epsilon;
    j["rho"] = r.point.rho;
    j["omegaT"] = r.point.omega_T;
    ordered_json results;
    for (const auto& o : r.outcomes) {
      ordered_json res;
      res["ok"] = o.ok;
      res["visibility"] = number_or_null(o.visibility);
      res["phase_rad"] = number_or_null(o.phase);
      res["phase_unwrapped_rad"] = number_or_null(o.unwrapped_phase);
      if (!o.ok) res["error"] = o.error;
      results[to_string(o.method)] = res;
    }
    j["results"] = results;
    ordered_json checks = ordered_json::array();
    for (const auto& c : r.checks) checks.push_back(check_json(c));
    j["checks"] = checks;
    j["passed"] = r.passed;
    pts.push_back(j);
  }
  doc["points"] = pts;
  out << doc.dump(2) << "\n";
}

void write_compare_text(std::ostream& out, const CompareReport& report) {
  out << "state " << report.state << "  config " << report.config_hash << "\n";
  const auto& v = report.vacuum_degeneracy;
  out << (v.passed ? "PASS " : "FAIL ") << v.name << ": " << format_double(v.deviation) << "\n";
  for (const auto& r : report.points) {
    out << (r.passed ? "PASS" : "FAIL") << " eps=" << format_double(r.point.epsilon)
        << " rho=" << format_double(r.point.rho) << " omegaT=" << format_double(r.point.omega_T)
        << "\n";
    for (const auto& c : r.checks) {
      out << "    " << c.name << ": " << format_double(c.deviation);
      if (c.budget > 0.0) out << " (budget " << format_double(c.budget) << ")";
      if (!c.passed) out << " FAILED";
      out << "\n";
    }
  }
  out << (report.passed ? "all budgets met" : "some budgets exceeded") << "\n";
}

}  // namespace qframe
