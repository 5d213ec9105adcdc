#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mkse/dynamics.hpp"

using namespace mkse;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SolverConfig small_config(int d, int n, double L) {
  SolverConfig cfg;
  cfg.grid = Grid(d, n, L);
  cfg.dt = 0.01;
  cfg.t_end = 1.0;
  cfg.transient = 0.5;
  cfg.sample_every = 0.1;
  return cfg;
}

SpectralField evolve(SolverConfig cfg, double dt, double t) {
  cfg.dt = dt;
  SpectralField u = random_field(cfg.grid, cfg.seed, cfg.amplitude, cfg.decay);
  EtdRk4 stepper(cfg.grid, cfg.lambda, dt, cfg.nonlinearity);
  const long steps = std::lround(t / dt);
  for (long i = 0; i < steps; ++i) stepper.advance(u);
  return u;
}

double distance(const SpectralField& a, const SpectralField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += std::norm(a.coeffs()[i] - b.coeffs()[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(Nonlinearity, NamesRoundTrip) {
  for (auto m : {Nonlinearity::full, Nonlinearity::cubic_only, Nonlinearity::none})
    EXPECT_EQ(parse_nonlinearity(to_string(m)), m);
  EXPECT_EQ(to_string(Nonlinearity::cubic_only), "cubic-only");
  EXPECT_THROW(parse_nonlinearity("quadratic"), ConfigError);
}

TEST(SolverConfig, ValidationNamesField) {
  SolverConfig cfg = small_config(1, 16, kTwoPi);
  EXPECT_NO_THROW(cfg.validate());
  auto field_of = [](SolverConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  SolverConfig bad = cfg;
  bad.dt = 0.1;
  EXPECT_EQ(field_of(bad), "dynamics.dt");
  bad = cfg;
  bad.dt = -1;
  EXPECT_EQ(field_of(bad), "dynamics.dt");
  bad = cfg;
  bad.sample_every = 0.015;
  EXPECT_EQ(field_of(bad), "dynamics.sample_every");
  bad = cfg;
  bad.transient = 2.0;
  EXPECT_FALSE(field_of(bad).empty());
  bad = cfg;
  bad.amplitude = 0.0;
  EXPECT_EQ(field_of(bad), "init.amplitude");
  EXPECT_EQ(cfg.total_steps(), 100);
  EXPECT_EQ(cfg.steps_per_sample(), 10);
}

TEST(LinearSymbol, KnownValues) {
  const double lambda = 0.7;
  Grid g(2, 16, kTwoPi);
  const auto sigma = linear_symbol(g, lambda);
  EXPECT_DOUBLE_EQ(sigma[g.flatten(0, 0)], lambda);
  EXPECT_NEAR(sigma[g.flatten(1, 0)], lambda, 1e-14);
  EXPECT_NEAR(sigma[g.flatten(0, g.index_of(-1))], lambda, 1e-14);
  EXPECT_NEAR(sigma[g.flatten(2, 0)], lambda - 12.0, 1e-13);
  EXPECT_NEAR(sigma[g.flatten(1, 1)], lambda - 4.0 + 2.0, 1e-13);
}

TEST(NonlinearTerm, ConstantField) {
  Grid g(1, 16, 3.0);
  SpectralField u(g);
  u.at(0) = 1.3;
  SpectralField n = nonlinear_term(u, Nonlinearity::full);
  EXPECT_NEAR(std::abs(n.at(0) + 1.3 * 1.3 * 1.3), 0.0, 1e-14);
  n.at(0) = 0;
  EXPECT_LT(n.max_abs(), 1e-14);
}

TEST(NonlinearTerm, NoneIsZero) {
  Grid g(2, 16, 1.0);
  SpectralField n = nonlinear_term(random_field(g, 1, 1.0, 2.0), Nonlinearity::none);
  EXPECT_EQ(n.max_abs(), 0.0);
}

TEST(NonlinearTerm, SineModeMatchesTrigExpansion) {
  // -sin^3 - sin*cos = -(3 sin - sin 3x)/4 - sin(2x)/2 for L = 2π.
  Grid g(1, 16, kTwoPi);
  SpectralField u(g);
  u.at(1) = Complex(0, -0.5);
  u.at(-1) = Complex(0, 0.5);
  SpectralField expect(g);
  auto add_sine = [&](int k, double a) {
    expect.at(k) += Complex(0, -0.5 * a);
    expect.at(-k) += Complex(0, 0.5 * a);
  };
  add_sine(1, -0.75);
  add_sine(3, 0.25);
  add_sine(2, -0.5);
  SpectralField n = nonlinear_term(u, Nonlinearity::full);
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_NEAR(std::abs(n.coeffs()[i] - expect.coeffs()[i]), 0.0, 1e-12);

  SpectralField cubic = nonlinear_term(u, Nonlinearity::cubic_only);
  EXPECT_NEAR(std::abs(cubic.at(2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(cubic.at(3) - Complex(0, -0.125)), 0.0, 1e-14);
}

TEST(NonlinearTerm, TwoDimensionalAdvection) {
  // u = cos(x + y): -u^3 - u(u_x + u_y) = -u^3 + 2 sin(x+y) cos(x+y) = -u^3 + sin(2(x+y)).
  Grid g(2, 16, kTwoPi);
  SpectralField u(g);
  u.at(1, 1) = u.at(-1, -1) = 0.5;
  SpectralField n = nonlinear_term(u, Nonlinearity::full);
  EXPECT_NEAR(std::abs(n.at(2, 2) - Complex(0, -0.5)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(n.at(1, 1) + 3.0 / 8.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(n.at(3, 3) + 1.0 / 8.0), 0.0, 1e-13);
}

TEST(Step, LinearFlowIsExact) {
  SolverConfig cfg = small_config(1, 32, kTwoPi);
  cfg.nonlinearity = Nonlinearity::none;
  cfg.lambda = 0.3;
  TrajectoryState s{0.0, SpectralField(cfg.grid)};
  s.u_hat.at(2) = Complex(0.2, 0.1);
  s.u_hat.at(-2) = std::conj(s.u_hat.at(2));
  const Complex start = s.u_hat.at(2);
  for (int i = 0; i < 100; ++i) s = step(s, cfg);
  EXPECT_NEAR(s.t, 1.0, 1e-12);
  const double sigma = cfg.lambda - 16.0 + 4.0;
  EXPECT_NEAR(std::abs(s.u_hat.at(2) / start - std::exp(sigma)), 0.0, 1e-10 * std::exp(sigma));
}

TEST(Step, ZeroIsFixedPoint) {
  SolverConfig cfg = small_config(2, 16, kTwoPi);
  TrajectoryState s{0.0, SpectralField(cfg.grid)};
  for (int i = 0; i < 10; ++i) s = step(s, cfg);
  EXPECT_EQ(s.u_hat.max_abs(), 0.0);
}

TEST(Step, BlowUpIsReported) {
  SolverConfig cfg = small_config(1, 16, kTwoPi);
  TrajectoryState s{0.0, SpectralField(cfg.grid)};
  s.u_hat.at(0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(step(s, cfg), BlowUpError);
}

TEST(Step, FourthOrderSelfConvergence) {
  SolverConfig cfg = small_config(1, 64, 8.0 * std::numbers::pi);
  cfg.lambda = 2.0;
  cfg.amplitude = 2.0;
  const SpectralField a = evolve(cfg, 0.04, 1.0);
  const SpectralField b = evolve(cfg, 0.02, 1.0);
  const SpectralField c = evolve(cfg, 0.01, 1.0);
  const double order = std::log2(distance(a, b) / distance(b, c));
  EXPECT_GE(order, 3.5);
}

TEST(Integrate, ObserverCount) {
  SolverConfig cfg = small_config(1, 16, kTwoPi);
  int calls = 0;
  double last = -1.0;
  integrate(cfg, [&](double t, const SpectralField&) {
    ++calls;
    EXPECT_GT(t, last);
    last = t;
  });
  EXPECT_EQ(calls, 11);
  EXPECT_NEAR(last, 1.0, 1e-12);
}

TEST(Integrate, DecaysBelowAttractorThreshold) {
  SolverConfig cfg = small_config(1, 32, kTwoPi);
  cfg.lambda = -0.5;
  cfg.t_end = 20.0;
  cfg.transient = 5.0;
  std::vector<std::pair<double, double>> j0;
  integrate(cfg, [&](double t, const SpectralField& u) { j0.push_back({t, sobolev_seminorm(u, 0)}); });
  for (std::size_t i = 1; i < j0.size(); ++i)
    if (j0[i].first > cfg.transient) EXPECT_LT(j0[i].second, j0[i - 1].second);
}

TEST(Integrate, Deterministic) {
  SolverConfig cfg = small_config(2, 16, kTwoPi);
  const auto a = integrate(cfg, nullptr);
  const auto b = integrate(cfg, nullptr);
  for (std::size_t i = 0; i < a.u_hat.coeffs().size(); ++i)
    EXPECT_EQ(a.u_hat.coeffs()[i], b.u_hat.coeffs()[i]);
}

TEST(NonlinearTerm, OutputIsExactlyHermitian) {
  for (int d : {1, 2}) {
    Grid g(d, 32, 3.0);
    SpectralField n = nonlinear_term(random_field(g, 8, 2.0, 1.5), Nonlinearity::full);
    EXPECT_EQ(n.hermitian_defect(), 0.0);
  }
}

TEST(Integrate, StaysHermitianNearStableConstant) {
  // At λ = 1, L = 2π the flow settles on u ≡ 1 while the |k| = 1 modes have
  // σ = λ > 0; a round-off anti-Hermitian part there used to grow without bound.
  SolverConfig cfg;
  cfg.t_end = 60.0;
  cfg.transient = 30.0;
  double worst_j1 = 0.0;
  const auto final_state = integrate(cfg, [&](double t, const SpectralField& u) {
    if (t > 20.0) worst_j1 = std::max(worst_j1, sobolev_seminorm(u, 1));
  });
  EXPECT_EQ(final_state.u_hat.hermitian_defect(), 0.0);
  EXPECT_LT(worst_j1, 1e-20);
}
