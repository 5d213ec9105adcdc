#include "mkse/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <thread>

#include <CLI11.hpp>

#include "mkse/inequality.hpp"
#include "mkse/report.hpp"
#include "mkse/sweep.hpp"

#ifndef MKSE_VERSION
#define MKSE_VERSION "unknown"
#endif

namespace mkse {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool has_format(const RunConfig& cfg, const std::string& f) {
  const auto& v = cfg.output.formats;
  return std::find(v.begin(), v.end(), f) != v.end();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string initial_data_description(const SolverConfig& s) {
  return "random real spectrum, seed " + std::to_string(s.seed) + ", amplitude " + fmt(s.amplitude) +
         ", |k|^-" + fmt(s.decay) + " decay, Nyquist modes zero";
}

RunConfig load_with_overrides(const std::string& path, const std::string& out_dir,
                              const std::vector<std::string>& formats) {
  RunConfig cfg = load_run_config(path);
  if (!out_dir.empty()) cfg.output.directory = out_dir;
  if (!formats.empty()) cfg.output.formats = formats;
  cfg.validate();
  return cfg;
}

json envelope(const RunConfig& cfg) {
  return {{"schema_version", kSchemaVersion}, {"version", MKSE_VERSION}, {"config", to_json(cfg)}};
}

int report_bound_failure(const BoundReport& report, std::ostream& err) {
  for (const auto& e : report.entries)
    if (!e.pass()) {
      err << "bound violation: " << e.name << " observed " << fmt(e.observed) << " exceeds bound "
          << fmt(e.bound) << " (lambda=" << fmt(report.lambda) << ", L=" << fmt(report.L)
          << ", seed=" << report.seed << ")\n";
    }
  return kExitBoundViolation;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& formats, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_with_overrides(config_path, out_dir, formats);
  RunResult r = simulate(cfg.solver, cfg.refine);
  const fs::path dir = cfg.output.directory;
  fs::create_directories(dir);
  if (has_format(cfg, "csv")) report::write_timeseries_csv(dir / "timeseries.csv", r.series);
  json meta = envelope(cfg);
  meta["refine"] = cfg.refine;
  meta["wall_seconds"] = r.wall_seconds;
  meta["initial_data"] = initial_data_description(cfg.solver);
  meta["samples"] = r.series.size();
  report::write_json(dir / "metadata.json", meta);
  json bound_doc = envelope(cfg);
  bound_doc["report"] = report::to_json(r.report);
  report::write_json(dir / "bound_report.json", bound_doc);

  out << "run d=" << cfg.solver.grid.dim() << " lambda=" << fmt(cfg.solver.lambda)
      << " L=" << fmt(cfg.solver.grid.length()) << " seed=" << cfg.solver.seed << " ("
      << r.series.size() << " samples, " << fmt(r.wall_seconds) << " s)\n";
  for (const auto& e : r.report.entries)
    out << "  " << e.name << ": observed " << fmt(e.observed) << ", bound " << fmt(e.bound) << ", "
        << (e.pass() ? "pass" : "FAIL") << '\n';
  if (!r.report.all_pass()) return report_bound_failure(r.report, err);
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& formats, int workers, bool bound_only,
              std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_with_overrides(config_path, out_dir, formats);
  if (!cfg.sweep) throw ConfigError("sweep", "section missing");
  if (cfg.sweep->values.size() < 3) throw ConfigError("sweep.values", "needs at least 3 values");
  const int d = cfg.solver.grid.dim();
  const fs::path dir = cfg.output.directory;
  fs::create_directories(dir);

  std::vector<RunResult> runs;
  SweepResult result = bound_only ? bound_only_sweep(cfg) : run_sweep(cfg, workers, &runs);

  if (has_format(cfg, "csv")) {
    std::ofstream csv(dir / "sweep.csv", std::ios::binary);
    report::write_sweep_csv(csv, result, d);
    const std::size_t n_seeds = cfg.sweep->seeds.size();
    for (std::size_t i = 0; i < runs.size(); ++i)
      report::write_timeseries_csv(dir / "runs" /
                                       ("run_p" + std::to_string(i / n_seeds) + "_s" +
                                        std::to_string(cfg.sweep->seeds[i % n_seeds]) + ".csv"),
                                   runs[i].series);
  }
  if (has_format(cfg, "json")) {
    json doc = envelope(cfg);
    doc["sweep"] = report::to_json(result);
    json reports = json::array();
    for (const auto& r : runs) reports.push_back(report::to_json(r.report));
    if (!bound_only) doc["run_reports"] = reports;
    report::write_json(dir / "sweep.json", doc);
  }
  if (has_format(cfg, "svg")) {
    const std::string x_label = result.parameter == "lambda" ? "lambda" : "L";
    std::vector<double> xs;
    for (const auto& p : result.points) xs.push_back(p.value);
    auto curve = [&](const std::string& label, auto&& get) {
      report::PlotSeries s{label, xs, {}};
      for (const auto& p : result.points) s.ys.push_back(get(p));
      return s;
    };
    std::vector<report::PlotSeries> crest{
        curve("bound - 1", [](const SweepPoint& p) { return p.bounds.crest_avg - 1.0; })};
    if (!bound_only)
      crest.push_back(curve("observed - 1", [](const SweepPoint& p) { return p.crest_avg_max - 1.0; }));
    report::write_loglog_svg(dir / "sweep_crest.svg", "time-averaged crest factor minus one",
                             x_label, crest);
    std::vector<report::PlotSeries> bound_curves{
        curve("J0 bound", [](const SweepPoint& p) { return p.bounds.J0; }),
        curve("J1 bound", [](const SweepPoint& p) { return p.bounds.J1; }),
        curve("sup bound", [](const SweepPoint& p) { return p.bounds.sup; }),
        curve("crest bound", [](const SweepPoint& p) { return p.bounds.crest_avg; })};
    if (d == 2)
      bound_curves.push_back(curve("J2 bound", [](const SweepPoint& p) { return p.bounds.J2.value_or(0.0); }));
    if (!bound_only) {
      bound_curves.push_back(curve("J0 observed", [](const SweepPoint& p) { return p.J0_max; }));
      bound_curves.push_back(curve("J1 observed", [](const SweepPoint& p) { return p.J1_max; }));
      bound_curves.push_back(curve("sup observed", [](const SweepPoint& p) { return p.sup_max; }));
    }
    report::write_loglog_svg(dir / "sweep_bounds.svg", "bounds", x_label, bound_curves);
  }

  out << "sweep over " << result.parameter << " (" << result.points.size() << " points"
      << (bound_only ? ", bounds only" : "") << ")\n";
  for (const auto& [name, f] : result.fits)
    out << "  fit " << name << ": exponent " << fmt(f.exponent) << ", r^2 " << fmt(f.r_squared)
        << '\n';
  int status = kExitOk;
  for (const auto& r : runs)
    if (!r.report.all_pass()) status = report_bound_failure(r.report, err);
  return status;
}

int cmd_bounds(int d, const std::vector<std::string>& lambdas, const std::vector<std::string>& lengths,
               const std::string& csv_path, std::ostream& out, std::ostream& err) {
  if (lambdas.empty()) {
    err << "usage error: at least one --lambda value is required\n";
    return kExitConfig;
  }
  auto parse_all = [&](const std::vector<std::string>& texts, const std::string& flag) {
    std::vector<double> v;
    for (const auto& t : texts) {
      try {
        v.push_back(parse_length(t));
      } catch (const std::invalid_argument&) {
        throw ConfigError(flag, "cannot parse '" + t + "'");
      }
    }
    return v;
  };
  const std::vector<double> ls = parse_all(lambdas, "--lambda");
  const std::vector<double> Ls =
      lengths.empty() ? std::vector<double>{2.0 * std::numbers::pi} : parse_all(lengths, "--L");

  std::vector<std::vector<double>> rows;
  for (double lambda : ls)
    for (double L : Ls) {
      try {
        rows.push_back(report::bound_row(bounds::bound_set(d, lambda, L)));
      } catch (const std::domain_error& e) {
        err << "domain error for d=" << d << ", lambda=" << fmt(lambda) << ", L=" << fmt(L) << ": "
            << e.what() << '\n';
        return kExitConfig;
      }
    }

  const auto header = report::bound_columns(d);
  for (std::size_t i = 0; i < header.size(); ++i) {
    char cell[32];
    std::snprintf(cell, sizeof cell, i ? " %17s" : "%2s", header[i].c_str());
    out << cell;
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      char cell[40];
      if (i == 0)
        std::snprintf(cell, sizeof cell, "%2d", int(row[i]));
      else
        std::snprintf(cell, sizeof cell, " %17.10g", row[i]);
      out << cell;
    }
    out << '\n';
  }
  if (!csv_path.empty()) {
    fs::path p = csv_path;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream csv(p, std::ios::binary);
    for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
    csv << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << report::format_number(row[i]);
      csv << '\n';
    }
  }
  return kExitOk;
}

int cmd_check_inequalities(long seeds, long budget, int workers, const std::string& out_dir,
                           std::ostream& out, std::ostream& err) {
  if (seeds < 1) {
    err << "usage error: --seeds must be >= 1\n";
    return kExitConfig;
  }
  if (budget < 0) {
    err << "usage error: --budget must be >= 0\n";
    return kExitConfig;
  }
  const auto summaries = inequality::run_suite(seeds, workers);
  json doc = {{"schema_version", kSchemaVersion},
              {"version", MKSE_VERSION},
              {"seeds", seeds},
              {"budget", budget},
              {"tolerance", inequality::kTolerance}};
  json checks = json::array();
  int status = kExitOk;
  for (const auto& s : summaries) {
    json c = {{"name", s.name},
              {"fields", s.fields},
              {"violations", s.violations},
              {"min_relative_slack", s.min_relative_slack},
              {"min_ratio", s.min_ratio},
              {"worst_seed", s.worst_seed}};
    if (s.first_violation_seed) {
      c["first_violation_seed"] = *s.first_violation_seed;
      err << "inequality violation: " << s.name << " at seed " << *s.first_violation_seed << '\n';
      status = kExitInequalityViolation;
    }
    out << s.name << ": " << s.fields << " fields, " << s.violations
        << " violations, min relative slack " << fmt(s.min_relative_slack) << '\n';
    checks.push_back(c);
  }
  doc["checks"] = checks;

  json probes = json::array();
  if (budget > 0) {
    for (const auto& name : inequality::registered_checks()) {
      try {
        const auto best = inequality::minimize_slack(name, budget, 0);
        probes.push_back({{"name", name},
                          {"ratio", best.ratio()},
                          {"relative_slack", best.relative_slack()},
                          {"field", best.field_descriptor}});
        out << "probe " << name << ": min ratio " << fmt(best.ratio()) << '\n';
      } catch (const inequality::InequalityViolation& v) {
        probes.push_back({{"name", name},
                          {"ratio", v.check().ratio()},
                          {"violation", true},
                          {"field", v.check().field_descriptor}});
        err << "inequality violation: " << name << " found by slack search (seed 0, ratio "
            << fmt(v.check().ratio()) << ")\n";
        status = kExitInequalityViolation;
      }
    }
  }
  doc["probes"] = probes;
  report::write_json(fs::path(out_dir) / "inequality_report.json", doc);
  return status;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and bound checking for the modified Kuramoto-Sivashinsky equation",
               "mkse"};
  app.set_version_flag("--version", MKSE_VERSION);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> formats;
  int workers = std::max(1u, std::thread::hardware_concurrency());
  bool bound_only = false;

  auto* run = app.add_subcommand("run", "integrate one trajectory and check the bounds");
  run->add_option("--config", config_path, "JSON run configuration")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  run->add_option("--format", formats, "csv, json or svg; repeatable")
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  auto* sweep = app.add_subcommand("sweep", "run a lambda or L sweep");
  sweep->add_option("--config", config_path, "JSON configuration with a sweep section")->required();
  sweep->add_option("--out", out_dir, "output directory (overrides the config)");
  sweep->add_option("--workers", workers, "parallel runs")->check(CLI::PositiveNumber);
  sweep->add_option("--format", formats, "csv, json or svg; repeatable")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  sweep->add_flag("--bound-only", bound_only, "evaluate the bounds without simulating");

  int d = 1;
  std::vector<std::string> lambdas, lengths;
  std::string csv_path;
  auto* bnds = app.add_subcommand("bounds", "tabulate the analytic bounds");
  bnds->add_option("--d", d, "dimension")->check(CLI::IsMember({1, 2}));
  bnds->add_option("--lambda", lambdas, "lambda values; repeatable");
  bnds->add_option("--L", lengths, "torus sides, e.g. 2pi; repeatable (default 2pi)");
  bnds->add_option("--csv", csv_path, "also write the table as CSV");

  long seeds = 1000, budget = 10000;
  std::string ineq_out = "out";
  auto* ineq = app.add_subcommand("check-inequalities", "randomized functional inequality suite");
  ineq->add_option("--seeds", seeds, "random fields per inequality");
  ineq->add_option("--budget", budget, "evaluations per slack search; 0 skips the searches");
  ineq->add_option("--workers", workers, "threads")->check(CLI::PositiveNumber);
  ineq->add_option("--out", ineq_out, "directory for inequality_report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, formats, out, err);
    if (*sweep) return cmd_sweep(config_path, out_dir, formats, workers, bound_only, out, err);
    if (*bnds) return cmd_bounds(d, lambdas, lengths, csv_path, out, err);
    if (*ineq) return cmd_check_inequalities(seeds, budget, workers, ineq_out, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BlowUpError& e) {
    err << e.what() << '\n';
    return kExitBlowUp;
  } catch (const SweepFailure& e) {
    err << "sweep failed: " << e.what() << '\n';
    try {
      std::rethrow_exception(e.cause());
    } catch (const BlowUpError&) {
      return kExitBlowUp;
    } catch (...) {
    }
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace mkse
