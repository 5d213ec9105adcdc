#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "mkse/sweep.hpp"

namespace mkse {

bool BoundReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const BoundEntry& e) { return e.pass(); });
}

std::optional<std::string> BoundReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.pass()) return e.name;
  return std::nullopt;
}

BoundReport make_bound_report(const SolverConfig& cfg, const ObservableSeries& series,
                              const TailStatistics& tail, std::optional<double> crest_avg) {
  const int d = cfg.grid.dim();
  const double L = cfg.grid.length();
  BoundReport report{d, cfg.lambda, L, cfg.seed, {}};
  if (cfg.lambda > 0.0) {
    const bounds::BoundSet b = bounds::bound_set(d, cfg.lambda, L);
    report.entries.push_back({"J0", tail[Column::J0].limsup, b.J0});
    report.entries.push_back({"J1", tail[Column::J1].limsup, b.J1});
    if (b.J2) report.entries.push_back({"J2", tail[Column::J2].limsup, *b.J2});
    report.entries.push_back({"sup", tail[Column::sup_norm].limsup, b.sup});
    if (crest_avg) report.entries.push_back({"crest_avg", *crest_avg, b.crest_avg});
  } else if (cfg.lambda <= -0.25 && !series.empty()) {
    const double j0_start = series.front().J[0];
    const double ratio = j0_start > 0.0 ? series.back().J[0] / j0_start : 0.0;
    report.entries.push_back({"attractor_decay", ratio, 1e-6});
  }
  return report;
}

RunResult simulate(const SolverConfig& cfg, int refine) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.config = cfg;
  result.series = ObservableSeries(cfg.grid, refine);
  const TrajectoryState final_state = integrate(
      cfg, [&](double t, const SpectralField& u_hat) { result.series.push_back(record(u_hat, t, refine)); });
  if (result.series.back().t < final_state.t)
    result.series.push_back(record(final_state.u_hat, final_state.t, refine));
  result.tail = tail_stats(result.series, cfg.transient);
  try {
    result.crest_avg = crest_time_average(result.series, cfg.transient);
  } catch (const StatisticsError&) {
    result.crest_avg.reset();
  }
  result.report = make_bound_report(cfg, result.series, result.tail, result.crest_avg);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SweepFailure::SweepFailure(const std::string& parameter, double value, std::uint64_t seed,
                           std::exception_ptr cause, const std::string& what)
    : std::runtime_error("run " + parameter + "=" + [&] {
        std::ostringstream os;
        os.precision(17);
        os << value;
        return os.str();
      }() + " seed=" + std::to_string(seed) + " failed: " + what),
      value_(value),
      seed_(seed),
      cause_(std::move(cause)) {}

SolverConfig sweep_point_config(const RunConfig& cfg, double value, std::uint64_t seed) {
  SolverConfig s = cfg.solver;
  const std::string parameter = cfg.sweep ? cfg.sweep->parameter : "lambda";
  if (parameter == "lambda")
    s.lambda = value;
  else
    s.grid = Grid(s.grid.dim(), s.grid.n(), value);
  s.seed = seed;
  return s;
}

namespace {

const SweepSpec& require_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep", "section missing");
  if (cfg.sweep->values.size() < 3) throw ConfigError("sweep.values", "needs at least 3 values");
  return *cfg.sweep;
}

double bound_parameter_lambda(const RunConfig& cfg, double value) {
  return cfg.sweep->parameter == "lambda" ? value : cfg.solver.lambda;
}

double bound_parameter_L(const RunConfig& cfg, double value) {
  return cfg.sweep->parameter == "L" ? value : cfg.solver.grid.length();
}

void try_fit(SweepResult& result, const std::string& key, const std::vector<double>& xs,
             const std::vector<double>& ys) {
  std::vector<double> px, py;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(ys[i])) {
      px.push_back(xs[i]);
      py.push_back(ys[i]);
    }
  if (px.size() < 3) return;
  result.fits[key] = fit_power_law(px, py);
}

void fit_bound_curves(SweepResult& result) {
  std::vector<double> xs, j0, j1, sup, crest;
  for (const auto& p : result.points) {
    xs.push_back(p.value);
    j0.push_back(p.bounds.J0);
    j1.push_back(p.bounds.J1);
    sup.push_back(p.bounds.sup);
    crest.push_back(p.bounds.crest_avg - 1.0);
  }
  try_fit(result, "bound_J0", xs, j0);
  try_fit(result, "bound_J1", xs, j1);
  try_fit(result, "bound_sup", xs, sup);
  try_fit(result, "bound_crest_minus_one", xs, crest);
  if (!result.points.empty() && result.points.front().bounds.J2) {
    std::vector<double> j2;
    for (const auto& p : result.points) j2.push_back(*p.bounds.J2);
    try_fit(result, "bound_J2", xs, j2);
  }
}

}  // namespace

SweepResult bound_only_sweep(const RunConfig& cfg) {
  const SweepSpec& spec = require_sweep(cfg);
  SweepResult result;
  result.parameter = spec.parameter;
  result.bound_only = true;
  for (double v : spec.values) {
    SweepPoint p;
    p.value = v;
    p.config = sweep_point_config(cfg, v, spec.seeds.empty() ? cfg.solver.seed : spec.seeds.front());
    p.bounds = bounds::bound_set(cfg.solver.grid.dim(), bound_parameter_lambda(cfg, v),
                                 bound_parameter_L(cfg, v));
    result.points.push_back(p);
  }
  fit_bound_curves(result);
  return result;
}

SweepResult run_sweep(const RunConfig& cfg, int workers, std::vector<RunResult>* runs) {
  const SweepSpec& spec = require_sweep(cfg);
  cfg.validate();
  const std::size_t n_values = spec.values.size();
  const std::size_t n_seeds = spec.seeds.size();
  const std::size_t n_jobs = n_values * n_seeds;

  std::vector<SolverConfig> configs;
  configs.reserve(n_jobs);
  for (double v : spec.values)
    for (std::uint64_t seed : spec.seeds) {
      SolverConfig s = sweep_point_config(cfg, v, seed);
      s.validate();
      configs.push_back(s);
    }

  std::vector<std::optional<RunResult>> results(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= n_jobs || failed.load()) return;
      try {
        results[job] = simulate(configs[job], cfg.refine);
      } catch (...) {
        errors[job] = std::current_exception();
        failed.store(true);
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, int(n_jobs)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t job = 0; job < n_jobs; ++job) {
    if (!errors[job]) continue;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[job]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw SweepFailure(spec.parameter, spec.values[job / n_seeds], spec.seeds[job % n_seeds],
                       errors[job], what);
  }

  SweepResult result;
  result.parameter = spec.parameter;
  for (std::size_t i = 0; i < n_values; ++i) {
    SweepPoint p;
    p.value = spec.values[i];
    p.config = configs[i * n_seeds];
    p.runs = n_seeds;
    p.bounds = bounds::bound_set(cfg.solver.grid.dim(), bound_parameter_lambda(cfg, p.value),
                                 bound_parameter_L(cfg, p.value));
    const bool has_j2 = cfg.solver.grid.dim() == 2;
    if (has_j2) p.J2_max = 0.0;
    p.crest_avg_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_seeds; ++j) {
      const RunResult& r = *results[i * n_seeds + j];
      p.J0_max = std::max(p.J0_max, r.tail[Column::J0].limsup);
      p.J1_max = std::max(p.J1_max, r.tail[Column::J1].limsup);
      if (has_j2) p.J2_max = std::max(*p.J2_max, r.tail[Column::J2].limsup);
      p.sup_max = std::max(p.sup_max, r.tail[Column::sup_norm].limsup);
      p.crest_avg_max = std::max(p.crest_avg_max,
                                 r.crest_avg.value_or(std::numeric_limits<double>::quiet_NaN()));
      p.all_pass = p.all_pass && r.report.all_pass();
    }
    if (!std::isfinite(p.crest_avg_max)) p.crest_avg_max = std::numeric_limits<double>::quiet_NaN();
    result.points.push_back(p);
  }

  fit_bound_curves(result);
  std::vector<double> xs, crest;
  for (const auto& p : result.points) {
    xs.push_back(p.value);
    crest.push_back(p.crest_avg_max - 1.0);
  }
  try_fit(result, "crest_minus_one", xs, crest);

  if (runs) {
    runs->clear();
    for (auto& r : results) runs->push_back(std::move(*r));
  }
  return result;
}

}  // namespace mkse
