#include "mkse/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "mkse/bounds.hpp"
#include "padding.hpp"

namespace mkse::inequality {
namespace {

using std::numbers::pi;

const Grid kGrid1d(1, 32, 2.0 * pi);
const Grid kGrid2d(2, 16, 2.0 * pi);

double volume(const Grid& g) { return std::pow(g.length(), g.dim()); }

SpectralField without_mean(SpectralField phi) {
  phi.at(0, 0) = 0.0;
  return phi;
}

void require_dim(const SpectralField& phi, int d, const char* what) {
  if (phi.grid().dim() != d)
    throw PreconditionError(std::string(what) + " needs a " + std::to_string(d) + "D field");
}

void require_zero_mean(const SpectralField& phi, const char* what) {
  const double norm = std::sqrt(sobolev_seminorm(phi, 0.0));
  if (std::abs(phi.at(0, 0)) > 1e-12 * norm)
    throw PreconditionError(std::string(what) + " needs a zero-mean field");
}

// Half-plane representatives k (one of each ±k pair) with 0 < |k| <= radius.
std::vector<std::size_t> half_plane_modes(const Grid& g, double radius, int max_component) {
  std::vector<std::size_t> modes;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    if (g.is_nyquist(idx[0]) || (g.dim() == 2 && g.is_nyquist(idx[1]))) continue;
    const double k2 = g.mode_norm_sq(i);
    if (k2 == 0.0 || k2 > radius * radius) continue;
    if (std::abs(g.mode(idx[0])) > max_component || std::abs(g.mode(idx[1])) > max_component) continue;
    if (g.conjugate_index(i) < i) continue;
    modes.push_back(i);
  }
  return modes;
}

void set_mode(SpectralField& f, std::size_t i, Complex value) {
  auto c = f.coeffs();
  const std::size_t j = f.grid().conjugate_index(i);
  c[i] = value;
  c[j] = std::conj(value);
}

std::string describe(const SpectralField& phi) {
  int active = 0;
  for (const auto& c : phi.coeffs())
    if (c != Complex{}) ++active;
  return std::to_string(phi.grid().dim()) + "D N=" + std::to_string(phi.grid().n()) +
         " nonzero_coeffs=" + std::to_string(active);
}

double gradient_sup(const SpectralField& phi, int refine) {
  const auto ux = detail::refined_values(partial_derivative(phi, {{1, 0}}), refine);
  const auto uy = detail::refined_values(partial_derivative(phi, {{0, 1}}), refine);
  double sup = 0.0;
  for (std::size_t i = 0; i < ux.size(); ++i)
    sup = std::max(sup, std::hypot(ux[i], uy[i]));
  return sup;
}

struct Entry {
  std::string name;
  const Grid* grid;
  bool zero_mean;
  std::function<InequalityCheck(const SpectralField&)> evaluate;
};

std::string eps_label(double eps) {
  return eps == 0.5 ? "0.5" : std::to_string(int(eps));
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    const std::array<std::array<double, 3>, 3> ladders{{{1, 1, 2}, {2, 2, 2}, {1, 1, 1}}};
    for (const Grid* g : {&kGrid1d, &kGrid2d})
      for (const auto& pqr : ladders) {
        const std::string name = "ladder(" + std::to_string(int(pqr[0])) + "," +
                                 std::to_string(int(pqr[1])) + "," + std::to_string(int(pqr[2])) +
                                 ")/" + std::to_string(g->dim()) + "d";
        e.push_back({name, g, true, [pqr](const SpectralField& phi) {
                       return check_ladder(phi, pqr[0], pqr[1], pqr[2]);
                     }});
      }
    for (double eps : {0.5, 1.0, 2.0})
      e.push_back({"sup_embedding_1d(eps=" + eps_label(eps) + ")", &kGrid1d, false,
                   [eps](const SpectralField& phi) { return check_sup_embedding_1d(phi, eps); }});
    for (double eps : {0.5, 1.0, 2.0})
      e.push_back({"sup_embedding_2d(eps=" + eps_label(eps) + ")", &kGrid2d, true,
                   [eps](const SpectralField& phi) { return check_sup_embedding_2d(phi, eps); }});
    e.push_back({"ladyzhenskaya_improved", &kGrid2d, true,
                 [](const SpectralField& phi) { return check_ladyzhenskaya_improved(phi); }});
    e.push_back({"du_sup", &kGrid2d, true,
                 [](const SpectralField& phi) { return check_du_sup(phi); }});
    e.push_back({"agmon(d=1,n=1)", &kGrid1d, false,
                 [](const SpectralField& phi) { return check_agmon_general(phi, 1); }});
    e.push_back({"agmon(d=2,n=2)", &kGrid2d, false,
                 [](const SpectralField& phi) { return check_agmon_general(phi, 2); }});
    return e;
  }();
  return entries;
}

const Entry& find_entry(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw std::invalid_argument("unknown inequality check '" + name + "'");
}

}  // namespace

// ---------------------------------------------------------------- InequalityCheck

double InequalityCheck::relative_slack() const {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? slack() / scale : 0.0;
}

double InequalityCheck::ratio() const {
  return lhs > 0.0 ? rhs / lhs : std::numeric_limits<double>::infinity();
}

bool InequalityCheck::passes(double tol) const {
  return slack() >= -tol * std::max(std::abs(lhs), std::abs(rhs));
}

InequalityViolation::InequalityViolation(InequalityCheck check)
    : std::runtime_error("inequality " + check.name + " violated: lhs = " + std::to_string(check.lhs) +
                         ", rhs = " + std::to_string(check.rhs) + " (" + check.field_descriptor + ")"),
      check_(std::move(check)) {}

// ---------------------------------------------------------------- fields

SpectralField random_trig_polynomial(const Grid& grid, std::uint64_t seed, bool zero_mean) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;

  auto modes = half_plane_modes(grid, grid.n() / 4.0, grid.n());
  std::shuffle(modes.begin(), modes.end(), rng);
  // Few-mode fields sit closest to equality in most checks, so bias toward them.
  const double u = uniform(rng);
  const std::size_t active = 1 + std::size_t(double(modes.size() - 1) * u * u * u + 0.5);
  const double decay = 3.0 * uniform(rng);

  SpectralField phi(grid);
  for (std::size_t m = 0; m < active; ++m) {
    const std::size_t i = modes[m];
    const double weight = std::pow(1.0 + std::sqrt(grid.mode_norm_sq(i)), -decay);
    const double re = normal(rng);
    const double im = normal(rng);
    set_mode(phi, i, weight * Complex(re, im));
  }
  if (!zero_mean) phi.at(0, 0) = normal(rng) * std::pow(10.0, 2.0 * uniform(rng) - 1.0);
  return phi;
}

// ---------------------------------------------------------------- checks

InequalityCheck check_ladder(const SpectralField& phi, double p, double q, double r) {
  if (!(q > 0.0) || !(p >= q) || !(r >= 0.0) || !std::isfinite(p + r))
    throw PreconditionError("ladder needs p >= q > 0 and r >= 0");
  const SpectralField f = without_mean(phi);
  InequalityCheck c;
  c.name = "ladder";
  c.lhs = sobolev_seminorm(f, p);
  c.rhs = std::pow(sobolev_seminorm(f, p + r), q / (r + q)) *
          std::pow(sobolev_seminorm(f, p - q), r / (r + q));
  c.field_descriptor = describe(phi);
  return c;
}

double sup_embedding_1d_derivative_term(const SpectralField& phi, double eps) {
  require_dim(phi, 1, "1D sup embedding");
  if (!(eps > 0.0)) throw PreconditionError("embedding needs eps > 0");
  return std::sqrt(bounds::riemann_zeta(1.0 + eps) / pi) *
         std::sqrt(sobolev_seminorm(phi, 0.5 * (1.0 + eps)));
}

InequalityCheck check_sup_embedding_1d(const SpectralField& phi, double eps, int refine) {
  InequalityCheck c;
  c.name = "sup_embedding_1d";
  c.rhs = sup_embedding_1d_derivative_term(phi, eps) +
          std::sqrt(sobolev_seminorm(phi, 0.0) / phi.grid().length());
  c.lhs = sup_norm_estimate(phi, refine);
  c.field_descriptor = describe(phi);
  return c;
}

double sup_embedding_2d_coefficient(double eps, double L) {
  if (!(eps > 0.0)) throw PreconditionError("embedding needs eps > 0");
  const double s = 1.0 + eps;
  return std::sqrt(4.0 * bounds::riemann_zeta(s) * bounds::dirichlet_beta(s)) / L *
         std::pow(L / (2.0 * pi), s);
}

InequalityCheck check_sup_embedding_2d(const SpectralField& phi, double eps, int refine) {
  require_dim(phi, 2, "2D sup embedding");
  require_zero_mean(phi, "2D sup embedding");
  InequalityCheck c;
  c.name = "sup_embedding_2d";
  c.rhs = sup_embedding_2d_coefficient(eps, phi.grid().length()) *
          std::sqrt(sobolev_seminorm(phi, 1.0 + eps));
  c.lhs = sup_norm_estimate(phi, refine);
  c.field_descriptor = describe(phi);
  return c;
}

InequalityCheck check_ladyzhenskaya_improved(const SpectralField& phi) {
  require_dim(phi, 2, "Ladyzhenskaya inequality");
  require_zero_mean(phi, "Ladyzhenskaya inequality");
  // phi^4 has band <= N per axis; the 2N-point trapezoid rule is exact.
  const RealField fine = refined_samples(phi, 2);
  double quartic = 0.0;
  for (double v : fine.samples()) quartic += v * v * v * v;
  InequalityCheck c;
  c.name = "ladyzhenskaya_improved";
  c.lhs = volume(phi.grid()) * quartic / double(fine.samples().size());
  c.rhs = 6.0 / pi * sobolev_seminorm(phi, 0.0) * sobolev_seminorm(phi, 1.0);
  c.field_descriptor = describe(phi);
  return c;
}

InequalityCheck check_du_sup(const SpectralField& phi, int refine) {
  require_dim(phi, 2, "||Du|| estimate");
  require_zero_mean(phi, "||Du|| estimate");
  const double j1 = sobolev_seminorm(phi, 1.0);
  if (!(j1 > 0.0)) throw PreconditionError("||Du|| estimate needs J_1 > 0");
  InequalityCheck c;
  c.name = "du_sup";
  c.lhs = gradient_sup(phi, refine);
  c.rhs = std::pow(sobolev_seminorm(phi, 3.0), 0.25) * std::pow(j1, 0.25) / std::sqrt(pi);
  c.field_descriptor = describe(phi);
  return c;
}

double agmon_rhs(int d, int n, double L, double J0, double J0_prime, double Jn) {
  double c = 0.0;
  if (d == 1 && n == 1)
    c = 1.0;
  else if (d == 2 && n == 2)
    c = 1.0 / std::sqrt(pi);
  else
    throw PreconditionError("Agmon bound supports (d, n) = (1, 1) or (2, 2)");
  const double a = double(2 * n - d) / (4.0 * n);
  const double b = double(d) / (4.0 * n);
  return std::pow(L, -0.5 * d) * std::sqrt(J0) + c * std::pow(J0_prime, a) * std::pow(Jn, b);
}

InequalityCheck check_agmon_general(const SpectralField& phi, int n, int refine) {
  const Grid& g = phi.grid();
  InequalityCheck c;
  c.name = "agmon";
  c.rhs = agmon_rhs(g.dim(), n, g.length(), sobolev_seminorm(phi, 0.0),
                    sobolev_seminorm(without_mean(phi), 0.0), sobolev_seminorm(phi, n));
  c.lhs = sup_norm_estimate(phi, refine);
  c.field_descriptor = describe(phi);
  return c;
}

// ---------------------------------------------------------------- registry

std::vector<std::string> registered_checks() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.push_back(e.name);
  return names;
}

InequalityCheck evaluate_registered(const std::string& name, std::uint64_t seed) {
  const Entry& e = find_entry(name);
  auto check = e.evaluate(random_trig_polynomial(*e.grid, seed, e.zero_mean));
  check.name = e.name;
  check.field_descriptor = "seed=" + std::to_string(seed) + " " + check.field_descriptor;
  return check;
}

InequalityCheck minimize_slack(const std::string& check_name, long budget, std::uint64_t seed) {
  const Entry& e = find_entry(check_name);
  if (budget < 1) throw std::invalid_argument("minimize_slack budget must be >= 1");
  const Grid& g = *e.grid;
  const auto modes = half_plane_modes(g, g.n() / 4.0, 3);
  const std::size_t dims = modes.size() + (e.zero_mean ? 0 : 1);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> pick(0, dims - 1);

  auto build = [&](const std::vector<Complex>& x) {
    SpectralField phi(g);
    for (std::size_t m = 0; m < modes.size(); ++m) set_mode(phi, modes[m], x[m]);
    if (!e.zero_mean) phi.at(0, 0) = x.back().real();
    return phi;
  };
  auto evaluate = [&](const std::vector<Complex>& x) {
    auto check = e.evaluate(build(x));
    check.name = e.name;
    return check;
  };

  std::optional<InequalityCheck> best;
  long evaluations = 0;
  const long per_restart = std::max(50L, budget / 10);
  for (int restart = 0; evaluations < budget; ++restart) {
    std::vector<Complex> x(dims);
    if (restart == 0) {
      x[0] = 1.0;
    } else {
      for (auto& v : x) v = Complex(normal(rng), normal(rng));
    }
    if (!e.zero_mean) x.back() = x.back().real();
    auto current = evaluate(x);
    ++evaluations;
    double step = 0.3;
    for (long it = 1; it < per_restart && evaluations < budget; ++it) {
      std::vector<Complex> y = x;
      if (normal(rng) > 0.0) {
        y[pick(rng)] += step * Complex(normal(rng), normal(rng));
      } else {
        for (auto& v : y) v += step * Complex(normal(rng), normal(rng));
      }
      if (!e.zero_mean) y.back() = y.back().real();
      auto candidate = evaluate(y);
      ++evaluations;
      if (candidate.ratio() < current.ratio()) {
        x = std::move(y);
        current = std::move(candidate);
        step *= 1.5;
      } else {
        step = std::max(1e-6, step * 0.95);
      }
    }
    current.field_descriptor = "probe seed=" + std::to_string(seed) + " restart=" +
                               std::to_string(restart) + " " + describe(build(x));
    if (!best || current.ratio() < best->ratio()) best = current;
  }
  if (best->ratio() < 1.0 - 1e-9) throw InequalityViolation(*best);
  return *best;
}

std::vector<CheckSummary> run_suite(long seeds, int workers) {
  if (seeds < 1) throw std::invalid_argument("suite needs at least one seed");
  workers = std::max(1, workers);
  const auto& entries = registry();
  // results[e][s]
  std::vector<std::vector<InequalityCheck>> results(entries.size(),
                                                    std::vector<InequalityCheck>(std::size_t(seeds)));
  auto work = [&](int worker) {
    for (long s = worker; s < seeds; s += workers)
      for (std::size_t e = 0; e < entries.size(); ++e)
        results[e][std::size_t(s)] = evaluate_registered(entries[e].name, std::uint64_t(s));
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  std::vector<CheckSummary> summary;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    CheckSummary cs;
    cs.name = entries[e].name;
    cs.fields = seeds;
    cs.min_relative_slack = std::numeric_limits<double>::infinity();
    cs.min_ratio = std::numeric_limits<double>::infinity();
    for (long s = 0; s < seeds; ++s) {
      const auto& r = results[e][std::size_t(s)];
      if (!r.passes()) {
        ++cs.violations;
        if (!cs.first_violation_seed) cs.first_violation_seed = std::uint64_t(s);
      }
      if (r.relative_slack() < cs.min_relative_slack) {
        cs.min_relative_slack = r.relative_slack();
        cs.worst_seed = std::uint64_t(s);
      }
      cs.min_ratio = std::min(cs.min_ratio, r.ratio());
    }
    summary.push_back(cs);
  }
  return summary;
}

}  // namespace mkse::inequality
