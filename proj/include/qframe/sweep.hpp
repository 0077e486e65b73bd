#ifndef QFRAME_SWEEP_HPP
#define QFRAME_SWEEP_HPP

#include "qframe/config.hpp"
#include "qframe/quantum_analytic.hpp"

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace qframe {

struct MethodOutcome {
  Method method = Method::closed_form;
  bool ok = false;
  std::string error;  // set when !ok
  std::complex<double> factor{0.0, 0.0};
  double visibility = 0.0;
  double phase = 0.0;
  double unwrapped_phase = 0.0;  // along the grid once assembled into a table
};

struct SweepRow {
  double value = 0.0;  // swept value (0 for single-point runs)
  bool regime_ok = true;
  std::string regime_summary;
  std::vector<MethodOutcome> outcomes;  // in SweepSpec::methods order
  std::vector<double> pairwise;         // |factor_i - factor_j| for i < j, NaN if either failed
  std::string config_hash;              // of the resolved point config
};

struct SweepTable {
  std::string parameter;
  std::string unit;
  std::vector<Method> methods;
  std::vector<SweepRow> rows;
  std::string config_hash;  // of the whole run
};

/// Evaluates every requested method at one resolved point. Method failures
/// are recorded in the row; configuration errors propagate.
[[nodiscard]] SweepRow evaluate_point(const RunConfig& point);

/// --threads, then QFRAME_THREADS, then hardware concurrency.
[[nodiscard]] unsigned resolve_thread_count(int requested);

/// Evaluates the grid concurrently and assembles rows in grid order; the
/// output does not depend on the thread count. Throws RegimeError before any
/// evaluation if a point is out of regime and the run does not allow it.
[[nodiscard]] SweepTable run_sweep(const RunConfig& config, unsigned threads);

/// True when some row has every requested method failing.
[[nodiscard]] bool has_total_failure(const SweepTable& table);

/// RFC-4180 CSV (CRLF, quoted where needed) with unit-annotated headers.
void write_csv(std::ostream& out, const SweepTable& table);
/// JSON document with schema_version "1".
void write_json(std::ostream& out, const SweepTable& table);

struct ComparePoint {
  double epsilon = 0.0;
  double rho = 0.0;
  double omega_T = 0.0;
};

/// eps = 0 check point and the desk-scale matrix
/// {1e-4, 1e-3} x {1e-2, 1e-1} x {1e4, 1e5}.
[[nodiscard]] std::vector<ComparePoint> default_compare_points();

struct CompareCheck {
  std::string name;
  double deviation = 0.0;
  double budget = 0.0;  // <= 0: reported only
  bool passed = true;
};

struct ComparePointResult {
  ComparePoint point;
  std::vector<MethodOutcome> outcomes;
  std::vector<CompareCheck> checks;
  bool passed = true;
};

struct CompareReport {
  std::string state;
  std::string config_hash;
  std::vector<ComparePointResult> points;
  CompareCheck vacuum_degeneracy;
  bool passed = true;
};

/// Cross-method comparison over dimensionless points for the configured
/// quantum state. Budgets: eps = 0 rows 1e-10 against the closed form;
/// otherwise |appendix - closed| / |closed| <= 1e-2 and Husimi / Fock-sum
/// within 1e-6; riccati vs appendix is reported without a budget.
[[nodiscard]] CompareReport compare_report(const RunConfig& config,
                                           const std::vector<ComparePoint>& points,
                                           unsigned threads);

void write_compare_json(std::ostream& out, const CompareReport& report);
void write_compare_text(std::ostream& out, const CompareReport& report);

}  // namespace qframe

#endif  // QFRAME_SWEEP_HPP
