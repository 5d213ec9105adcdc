// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mkse/bounds.hpp"
#include "mkse/dynamics.hpp"
#include "mkse/inequality.hpp"
#include "mkse/observables.hpp"
#include "mkse/report.hpp"
#include "mkse/sweep.hpp"

#ifndef MKSE_CLI_PATH
#error "MKSE_CLI_PATH must point at the mkse executable"
#endif

using namespace mkse;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

int workers() { return int(std::max(1u, std::thread::hardware_concurrency())); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Runs cached between criteria 3/4 and 5.
std::vector<RunResult> g_runs_1d, g_runs_2d;

Verdict linear_flow() {
  double worst = 0.0;
  for (int d : {1, 2}) {
    SolverConfig cfg;
    cfg.grid = Grid(d, d == 1 ? 64 : 32, kTwoPi);
    cfg.lambda = 1.0;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.transient = 0.5;
    cfg.sample_every = 0.1;
    cfg.nonlinearity = Nonlinearity::none;
    const SpectralField u0 = random_field(cfg.grid, cfg.seed, cfg.amplitude, cfg.decay);
    const TrajectoryState end = integrate(cfg, nullptr);
    const auto sigma = linear_symbol(cfg.grid, cfg.lambda);
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
      const Complex expected = u0.coeffs()[i] * std::exp(sigma[i]);
      const Complex got = end.u_hat.coeffs()[i];
      // Modes that decayed below the normal range compare in absolute terms.
      if (std::abs(expected) < 1e-280) {
        if (std::abs(got) > 1e-280) worst = std::max(worst, 1.0);
        continue;
      }
      worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
    }
  }
  return {worst <= 1e-8, "worst per-mode relative error " + num(worst)};
}

Verdict dissipative_regime() {
  double worst = 0.0;
  for (std::uint64_t seed : {0, 1, 2}) {
    SolverConfig cfg;
    cfg.lambda = -0.5;
    cfg.t_end = 50.0;
    cfg.transient = 25.0;
    cfg.seed = seed;
    double j0_start = 0.0, j0_end = 0.0;
    integrate(cfg, [&](double t, const SpectralField& u) {
      if (t == 0.0) j0_start = sobolev_seminorm(u, 0);
      j0_end = sobolev_seminorm(u, 0);
    });
    worst = std::max(worst, j0_end / j0_start);
  }
  return {worst <= 1e-6, "max J0(50)/J0(0) over 3 seeds " + num(worst)};
}

Verdict compliance(int d, std::vector<double> lambdas, std::vector<std::uint64_t> seeds,
                   std::vector<RunResult>& runs) {
  RunConfig cfg = parse_run_config({{"grid", {{"d", d}, {"N", d == 1 ? 128 : 64}, {"L", "2pi"}}},
                                    {"sweep", {{"parameter", "lambda"}, {"values", lambdas}, {"seeds", seeds}}}});
  if (d == 1) {
    cfg.solver.t_end = 200.0;
    cfg.solver.transient = 100.0;
  } else {
    cfg.solver.t_end = 100.0;
    cfg.solver.transient = 50.0;
  }
  cfg.validate();
  run_sweep(cfg, workers(), &runs);
  bool pass = true;
  std::string first_failure;
  double worst_ratio = 0.0;
  for (const auto& r : runs)
    for (const auto& e : r.report.entries) {
      if (e.name == "crest_avg") continue;  // criterion 5
      worst_ratio = std::max(worst_ratio, e.observed / e.bound);
      if (!e.pass() && pass) {
        pass = false;
        first_failure = " first failure " + e.name + " at lambda=" + num(r.config.lambda) +
                        " seed=" + std::to_string(r.config.seed);
      }
    }
  return {pass, std::to_string(runs.size()) + " runs, max observed/bound " + num(worst_ratio) +
                    first_failure};
}

Verdict crest() {
  bool pass = !g_runs_1d.empty() && !g_runs_2d.empty();
  double worst_ratio = 0.0, min_crest = INFINITY;
  for (const auto* runs : {&g_runs_1d, &g_runs_2d})
    for (const auto& r : *runs) {
      const double bound = bounds::bound_crest_avg(r.config.grid.dim(), r.config.lambda,
                                                   r.config.grid.length());
      if (!r.crest_avg) {
        pass = false;
        continue;
      }
      worst_ratio = std::max(worst_ratio, *r.crest_avg / bound);
      pass = pass && *r.crest_avg <= bound;
      for (const auto& row : r.series.rows()) {
        min_crest = std::min(min_crest, row.crest);
        pass = pass && row.crest >= 1.0 - 1e-9;
      }
    }
  return {pass, "max time-averaged crest/bound " + num(worst_ratio) + ", min pointwise crest " +
                    num(min_crest)};
}

Verdict scaling() {
  const auto start = std::chrono::steady_clock::now();
  auto exponent = [](int d, const std::string& parameter, std::vector<double> values) {
    RunConfig cfg = parse_run_config({{"grid", {{"d", d}}},
                                      {"dynamics", {{"lambda", 1000.0}}},
                                      {"sweep", {{"parameter", parameter}, {"values", values}}}});
    return bound_only_sweep(cfg).fits.at("bound_crest_minus_one").exponent;
  };
  const std::vector<double> lambdas{1e2, 1e3, 1e4, 1e5, 1e6};
  std::vector<double> lengths;
  for (int k = 0; k < 4; ++k) lengths.push_back(kTwoPi * std::pow(10.0, k));
  const double l1 = exponent(1, "lambda", lambdas);
  const double l2 = exponent(2, "lambda", lambdas);
  const double s1 = exponent(1, "L", lengths);
  const double s2 = exponent(2, "L", lengths);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = std::abs(l1 - 0.125) <= 0.005 && std::abs(l2 - 0.375) <= 0.005 &&
                    std::abs(s1 - 0.5) <= 1e-3 && std::abs(s2 - 1.5) <= 0.01 && seconds < 1.0;
  return {pass, "lambda exponents " + num(l1) + " (1D), " + num(l2) + " (2D); L exponents " +
                    num(s1) + " (1D), " + num(s2) + " (2D); " + num(seconds) + " s"};
}

Verdict inequality_suite() {
  const auto summaries = inequality::run_suite(1000, workers());
  long violations = 0;
  double min_slack = INFINITY;
  std::string worst;
  for (const auto& s : summaries) {
    violations += s.violations;
    if (s.min_relative_slack < min_slack) {
      min_slack = s.min_relative_slack;
      worst = s.name;
    }
  }
  return {violations == 0 && summaries.size() == 16,
          std::to_string(summaries.size()) + " inequalities x 1000 fields, " +
              std::to_string(violations) + " violations, min relative slack " + num(min_slack) +
              " (" + worst + ")"};
}

// Σ_{|α|=s} s!/α! ∫ |D^α u|² by trapezoid quadrature of the sampled derivatives.
double physical_seminorm(const SpectralField& u, int s) {
  const Grid& g = u.grid();
  const double cell = std::pow(g.length() / g.n(), g.dim());
  double total = 0.0;
  for (int a = (g.dim() == 1 ? s : 0); a <= s; ++a) {
    double binomial = 1.0;
    for (int i = 1; i <= a; ++i) binomial = binomial * double(s - a + i) / double(i);
    const RealField du = inverse_transform(partial_derivative(u, {{a, s - a}}));
    double sum = 0.0;
    for (double v : du.samples()) sum += v * v;
    total += binomial * sum * cell;
  }
  return total;
}

Verdict parseval() {
  double worst = 0.0;
  for (int d : {1, 2}) {
    Grid g(d, d == 1 ? 64 : 32, d == 1 ? kTwoPi : 3.0);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SpectralField u = random_field(g, seed, 1.0, 3.0);
      for (int s = 0; s <= 4; ++s) {
        const double spectral = sobolev_seminorm(u, s);
        const double physical = physical_seminorm(u, s);
        worst = std::max(worst, std::abs(spectral - physical) / spectral);
      }
    }
  }
  return {worst <= 1e-10, "worst relative mismatch over 2 x 100 fields, s = 0..4: " + num(worst)};
}

Verdict self_convergence() {
  const Grid g(1, 128, 32.0 * std::numbers::pi);
  const double lambda = 1.0, dt = 0.05;
  auto solve = [&](double h) {
    SpectralField u = random_field(g, 0, 1.0, 3.0);
    EtdRk4 stepper(g, lambda, h, Nonlinearity::full);
    for (long i = 0, n = std::lround(1.0 / h); i < n; ++i) stepper.advance(u);
    return u;
  };
  auto dist = [](const SpectralField& a, const SpectralField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += std::norm(a.coeffs()[i] - b.coeffs()[i]);
    return std::sqrt(s);
  };
  const SpectralField ref = solve(dt / 64);
  const double e1 = dist(solve(dt), ref);
  const double e2 = dist(solve(dt / 2), ref);
  const double order = std::log2(e1 / e2);
  return {order >= 3.5, "1D N=128 L=32pi lambda=1, dt=" + num(dt) + " vs dt/2: order " + num(order) +
                            " (errors " + num(e1) + ", " + num(e2) + ")"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "mkse_acceptance_repro";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const json cfg = {{"grid", {{"d", 1}, {"N", 64}, {"L", "8pi"}}},
                    {"dynamics", {{"lambda", 1.0}, {"dt", 0.01}, {"t_end", 20.0}, {"transient", 10.0}}},
                    {"sweep", {{"parameter", "lambda"}, {"values", {0.5, 1.0, 2.0}}, {"seeds", {0, 1}}}},
                    {"output", {{"formats", {"csv"}}}}};
  std::ofstream(dir / "sweep.json") << cfg.dump(2);
  std::vector<fs::path> outs{dir / "first", dir / "second"};
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const std::string cmd = std::string("\"") + MKSE_CLI_PATH + "\" sweep --config \"" +
                            (dir / "sweep.json").string() + "\" --out \"" + outs[i].string() +
                            "\" --workers " + std::to_string(i + 1) + " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "sweep command failed: " + cmd};
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(outs[0]))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(fs::relative(e.path(), outs[0]));
  std::size_t identical = 0;
  for (const auto& f : files)
    if (fs::exists(outs[1] / f) && slurp(outs[0] / f) == slurp(outs[1] / f)) ++identical;
  fs::remove_all(dir);
  return {!files.empty() && identical == files.size(),
          std::to_string(identical) + "/" + std::to_string(files.size()) +
              " CSV files byte-identical across two executions (1 and 2 workers)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "linear-flow oracle", linear_flow},
      {2, "dissipative regime", dissipative_regime},
      {3, "1D bound compliance",
       [] { return compliance(1, {0.5, 1, 2, 4, 8}, {0, 1, 2, 3, 4}, g_runs_1d); }},
      {4, "2D bound compliance", [] { return compliance(2, {0.5, 1, 2}, {0, 1, 2}, g_runs_2d); }},
      {5, "crest compliance", crest},
      {6, "bound-formula scaling", scaling},
      {7, "inequality suite", inequality_suite},
      {8, "Parseval consistency", parseval},
      {9, "self-convergence", self_convergence},
      {10, "reproducibility", reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("[%s] criterion %d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                v.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
