#include "qframe/config.hpp"
#include "qframe/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum Exit { ok = 0, config_error = 1, regime_violation = 2, numerical_failure = 3 };

struct Options {
  std::string config_path;
  std::string preset_name;
  std::string methods;
  std::string out_path;
  std::string format = "csv";
  std::optional<double> ode_tol;
  std::optional<double> quad_tol;
  bool allow_out_of_regime = false;
  int threads = 0;
};

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "TOML configuration file");
  cmd->add_option("--preset", o.preset_name, "Named preset used as the base configuration");
  cmd->add_option("--method", o.methods, "Comma-separated methods (overrides [sweep] methods)");
  cmd->add_option("--out", o.out_path, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--ode-tol", o.ode_tol, "ODE absolute/relative tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--quad-tol", o.quad_tol, "Quadrature refinement tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--allow-out-of-regime", o.allow_out_of_regime,
                "Evaluate points that violate the scale hierarchy");
  cmd->add_option("--threads", o.threads, "Worker threads (fallback: QFRAME_THREADS)")
      ->check(CLI::PositiveNumber);
}

// Precedence: preset < config file < command-line flags.
qframe::RunConfig build_config(const Options& o) {
  qframe::RunConfig run =
      o.preset_name.empty() ? qframe::default_run_config() : qframe::preset(o.preset_name);
  if (!o.config_path.empty()) run = qframe::load_config(o.config_path, run);
  if (!o.methods.empty()) run.sweep.methods = qframe::parse_method_list(o.methods);
  if (o.ode_tol) run.numerics.ode_tol = *o.ode_tol;
  if (o.quad_tol) run.numerics.quad_tol = *o.quad_tol;
  if (o.allow_out_of_regime) run.numerics.allow_out_of_regime = true;
  return run;
}

template <class Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qframe::ConfigError("cannot open output file '" + path + "'");
  write(out);
  if (!out) throw qframe::ConfigError("failed writing '" + path + "'");
}

int run_table(const Options& o, bool single_point) {
  qframe::RunConfig run = build_config(o);
  if (single_point) {
    run.sweep.parameter.clear();
    run.sweep.grid.clear();
  } else if (run.sweep.parameter.empty()) {
    throw qframe::ConfigError("sweep: no [sweep] parameter/grid configured");
  }
  const auto table = qframe::run_sweep(run, qframe::resolve_thread_count(o.threads));
  emit(o.out_path, [&](std::ostream& out) {
    if (o.format == "json") {
      qframe::write_json(out, table);
    } else {
      qframe::write_csv(out, table);
    }
  });
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (const auto& outcome : table.rows[r].outcomes) {
      if (!outcome.ok) {
        std::cerr << "row " << r << " " << qframe::to_string(outcome.method) << ": "
                  << outcome.error << "\n";
      }
    }
  }
  return qframe::has_total_failure(table) ? numerical_failure : ok;
}

int run_compare(const Options& o) {
  const qframe::RunConfig run = build_config(o);
  const auto report = qframe::compare_report(run, qframe::default_compare_points(),
                                             qframe::resolve_thread_count(o.threads));
  emit(o.out_path, [&](std::ostream& out) {
    if (o.format == "json") {
      qframe::write_compare_json(out, report);
    } else {
      qframe::write_compare_text(out, report);
    }
  });
  if (o.format == "json") qframe::write_compare_text(std::cerr, report);
  const bool any_point_dead = std::any_of(report.points.begin(), report.points.end(), [](const auto& p) {
    return std::none_of(p.outcomes.begin(), p.outcomes.end(), [](const auto& x) { return x.ok; });
  });
  return any_point_dead ? numerical_failure : ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference phase and visibility of an atom bound to a vibrating frame"};
  app.require_subcommand(1);
  Options opts;

  auto* phase = app.add_subcommand("phase", "Evaluate a single point");
  add_run_options(phase, opts);
  auto* sweep = app.add_subcommand("sweep", "Evaluate the configured parameter grid");
  add_run_options(sweep, opts);
  auto* compare = app.add_subcommand("compare", "Cross-method report over desk-scale points");
  add_run_options(compare, opts);

  auto* preset_cmd = app.add_subcommand("preset", "List or show presets");
  preset_cmd->require_subcommand(1);
  auto* preset_list = preset_cmd->add_subcommand("list", "List preset names");
  std::string show_name;
  auto* preset_show = preset_cmd->add_subcommand("show", "Print a preset as TOML");
  preset_show->add_option("name", show_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (*phase) return run_table(opts, true);
    if (*sweep) return run_table(opts, false);
    if (*compare) return run_compare(opts);
    if (*preset_list) {
      for (const auto& n : qframe::preset_names()) std::cout << n << "\n";
      return ok;
    }
    if (*preset_show) {
      const auto run = qframe::preset(show_name);
      std::cout << "# preset " << show_name << "\n";
      if (show_name == "superfluid-sec4") {
        const auto g = qframe::superfluid_geometry();
        std::cout << "# channel " << qframe::format_double(g.channel_width) << " m x "
                  << qframe::format_double(g.channel_length) << " m, aperture "
                  << qframe::format_double(g.aperture) << " m, c_He "
                  << qframe::format_double(g.sound_speed) << " m/s, acoustic wavelength "
                  << qframe::format_double(g.acoustic_wavelength()) << " m\n";
      }
      std::cout << qframe::to_toml(run);
      return ok;
    }
  } catch (const qframe::RegimeError& e) {
    std::cerr << "regime violation: " << e.what() << "\n(use --allow-out-of-regime to evaluate anyway)\n";
    return regime_violation;
  } catch (const qframe::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical_failure;
  }
  return ok;
}
