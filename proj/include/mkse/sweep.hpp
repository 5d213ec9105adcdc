#pragma once

// Run configuration, single-trajectory runs with bound-compliance reports,
// and parallel parameter sweeps with power-law fits.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mkse/bounds.hpp"
#include "mkse/dynamics.hpp"
#include "mkse/observables.hpp"

namespace mkse {

inline constexpr int kSchemaVersion = 1;

/// Parses a length such as "6.28", "2pi", "2*pi" or "pi".
double parse_length(const std::string& text);

struct SweepSpec {
  std::string parameter = "lambda";  ///< "lambda" or "L"
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json", "svg"};
};

struct RunConfig {
  SolverConfig solver;
  int refine = 4;
  std::optional<SweepSpec> sweep;
  OutputSpec output;

  /// Solver constraints plus: at least 10 samples after the transient,
  /// sweep values positive, formats among csv/json/svg.
  void validate() const;
};

/// Builds a RunConfig from a JSON document with optional sections grid,
/// dynamics, init, sweep, output. Missing fields take dimension-dependent
/// defaults. Throws ConfigError naming the field.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

/// Full configuration with every default filled in.
nlohmann::json to_json(const RunConfig& cfg);

struct BoundEntry {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;

  double margin() const { return bound - observed; }
  /// margin >= -1e-6 bound.
  bool pass() const { return margin() >= -1e-6 * bound; }
};

struct BoundReport {
  int d = 1;
  double lambda = 0.0;
  double L = 0.0;
  std::uint64_t seed = 0;
  std::vector<BoundEntry> entries;

  bool all_pass() const;
  /// Name of the first failing entry, if any.
  std::optional<std::string> first_failure() const;
};

/// Compares tail statistics with the analytic bounds. For λ > 0: J0, J1,
/// J2 (2D), sup limsups and the crest time average. For λ <= -1/4:
/// J_0(t_end) / J_0(0) against 1e-6. Otherwise no entries.
BoundReport make_bound_report(const SolverConfig& cfg, const ObservableSeries& series,
                              const TailStatistics& tail, std::optional<double> crest_avg);

struct RunResult {
  SolverConfig config;
  ObservableSeries series;
  TailStatistics tail;
  std::optional<double> crest_avg;
  BoundReport report;
  double wall_seconds = 0.0;
};

/// Integrates one trajectory and records observables at every sample.
RunResult simulate(const SolverConfig& cfg, int refine = 4);

struct SweepPoint {
  double value = 0.0;
  SolverConfig config;  ///< seed of the first run
  std::size_t runs = 0;
  double J0_max = 0.0;
  double J1_max = 0.0;
  std::optional<double> J2_max;
  double sup_max = 0.0;
  double crest_avg_max = 0.0;
  bounds::BoundSet bounds{};
  bool all_pass = true;
};

struct SweepResult {
  std::string parameter;
  bool bound_only = false;
  std::vector<SweepPoint> points;
  /// Power-law fits keyed by curve name, e.g. "crest_minus_one",
  /// "bound_crest_minus_one", "bound_J0". Present only with >= 3 points.
  std::map<std::string, PowerLawFit> fits;
};

/// A run inside a sweep failed; carries the offending parameters and the
/// original exception.
class SweepFailure : public std::runtime_error {
 public:
  SweepFailure(const std::string& parameter, double value, std::uint64_t seed,
               std::exception_ptr cause, const std::string& what);
  double value() const { return value_; }
  std::uint64_t seed() const { return seed_; }
  std::exception_ptr cause() const { return cause_; }

 private:
  double value_;
  std::uint64_t seed_;
  std::exception_ptr cause_;
};

/// SolverConfig of one sweep point (parameter applied to the base config).
SolverConfig sweep_point_config(const RunConfig& cfg, double value, std::uint64_t seed);

/// Runs every (value, seed) pair on `workers` threads. Results are merged in
/// (value, seed) order and do not depend on the worker count. When `runs`
/// is given it receives the per-run results in the same order.
SweepResult run_sweep(const RunConfig& cfg, int workers, std::vector<RunResult>* runs = nullptr);

/// Evaluates the bounds over the sweep values without simulating.
SweepResult bound_only_sweep(const RunConfig& cfg);

}  // namespace mkse
