#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mkse/bounds.hpp"
#include "mkse/dynamics.hpp"
#include "mkse/observables.hpp"

using namespace mkse;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ObservableSeries constant_series(double value, int n) {
  ObservableSeries s(Grid(1, 8, 1.0), 4);
  for (int i = 0; i < n; ++i) {
    ObservableRow r;
    r.t = 0.5 * i;
    r.J.fill(value);
    r.sup_norm = r.mean = r.J0_prime = r.crest = value;
    s.push_back(r);
  }
  return s;
}

}  // namespace

TEST(Record, ConstantHasUnitCrest) {
  Grid g(2, 16, 3.0);
  SpectralField u(g);
  u.at(0, 0) = -0.8;
  const ObservableRow r = record(u, 0.0);
  EXPECT_DOUBLE_EQ(r.crest, 1.0);
  EXPECT_DOUBLE_EQ(r.mean, -0.8);
  EXPECT_DOUBLE_EQ(r.J0_prime, 0.0);
  EXPECT_DOUBLE_EQ(r.J[1], 0.0);
}

TEST(Record, SineCrestIsSqrtTwo) {
  const double L = 5.0;
  Grid g(1, 32, L);
  SpectralField u(g);
  u.at(1) = Complex(0, -0.5);
  u.at(-1) = Complex(0, 0.5);
  const ObservableRow r = record(u, 1.0);
  EXPECT_NEAR(r.sup_norm, 1.0, 1e-6);
  EXPECT_NEAR(r.J[0], L / 2, 1e-14);
  EXPECT_NEAR(r.crest, std::sqrt(2.0), 2e-6);
}

TEST(Record, FluctuationIndependentOfMean) {
  const double L = 2.0;
  Grid g(1, 16, L);
  for (double c : {0.0, 1.0, -3.5}) {
    SpectralField u(g);
    u.at(0) = c;
    u.at(1) = Complex(0, -0.5);
    u.at(-1) = Complex(0, 0.5);
    const ObservableRow r = record(u, 0.0);
    EXPECT_NEAR(r.J0_prime, L / 2, 1e-14);
    EXPECT_NEAR(r.J[0] - L * c * c, r.J0_prime, 1e-12);
  }
}

TEST(Record, ZeroFieldHasUndefinedCrest) {
  const ObservableRow r = record(SpectralField(Grid(1, 8, 1.0)), 0.0);
  EXPECT_TRUE(std::isnan(r.crest));
}

TEST(ObservableSeries, RequiresIncreasingTimes) {
  ObservableSeries s(Grid(1, 8, 1.0), 4);
  ObservableRow r;
  r.t = 1.0;
  s.push_back(r);
  EXPECT_THROW(s.push_back(r), std::invalid_argument);
}

TEST(Columns, NamesMatchCsvHeader) {
  std::string header;
  for (Column c : kAllColumns) header += column_name(c) + ",";
  EXPECT_EQ(header, "J0,J1,J2,J3,J4,sup,mean,J0_prime,crest,");
}

TEST(TailStats, ConstantSeries) {
  const auto s = constant_series(2.5, 40);
  const auto stats = tail_stats(s, 3.0);
  for (Column c : kAllColumns) {
    EXPECT_DOUBLE_EQ(stats[c].limsup, 2.5);
    EXPECT_NEAR(stats[c].time_average, 2.5, 1e-14);
  }
  EXPECT_EQ(stats.samples, 33u);
}

TEST(TailStats, OscillationAveragesOut) {
  ObservableSeries s(Grid(1, 8, 1.0), 4);
  for (int i = 0; i <= 20000; ++i) {
    ObservableRow r;
    r.t = 0.01 * i;
    r.J[0] = std::sin(r.t);
    s.push_back(r);
  }
  const auto stats = tail_stats(s, 10.0);
  EXPECT_LE(std::abs(stats[Column::J0].time_average), 0.05);
  EXPECT_NEAR(stats[Column::J0].limsup, 1.0, 1e-4);
}

TEST(TailStats, NeedsTenSamples) {
  const auto s = constant_series(1.0, 12);
  EXPECT_THROW(tail_stats(s, 1.5), StatisticsError);
  EXPECT_NO_THROW(tail_stats(s, 0.5));
}

TEST(CrestAverage, ConstantProfile) {
  Grid g(1, 32, kTwoPi);
  SpectralField u = random_field(g, 4, 1.0, 3.0);
  ObservableSeries s(g, 4);
  for (int i = 0; i < 20; ++i) s.push_back(record(u, 0.1 * i));
  EXPECT_NEAR(crest_time_average(s, 0.0), record(u, 0.0).crest, 1e-14);

  SpectralField c(g);
  c.at(0) = 2.0;
  ObservableSeries flat(g, 4);
  for (int i = 0; i < 20; ++i) flat.push_back(record(c, 0.1 * i));
  EXPECT_DOUBLE_EQ(crest_time_average(flat, 0.0), 1.0);
}

TEST(CrestAverage, ZeroEnergyNamesTime) {
  Grid g(1, 8, 1.0);
  ObservableSeries s(g, 4);
  SpectralField u(g);
  u.at(0) = 1.0;
  for (int i = 0; i < 15; ++i) s.push_back(record(i == 12 ? SpectralField(g) : u, double(i)));
  try {
    crest_time_average(s, 0.5);
    FAIL() << "expected StatisticsError";
  } catch (const StatisticsError& e) {
    EXPECT_NE(std::string(e.what()).find("t = 12"), std::string::npos);
  }
}

TEST(CrestAverage, SimulatedRunBelowBound) {
  SolverConfig cfg;
  cfg.t_end = 40.0;
  cfg.transient = 20.0;
  ObservableSeries s(cfg.grid, 4);
  integrate(cfg, [&](double t, const SpectralField& u) { s.push_back(record(u, t)); });
  const auto stats = tail_stats(s, cfg.transient);
  EXPECT_LE(stats[Column::J0].limsup, 7.853981633974483);
  EXPECT_LE(stats[Column::J1].limsup, 14.40437439161487);
  const double crest = crest_time_average(s, cfg.transient);
  EXPECT_GE(crest, 1.0 - 1e-9);
  EXPECT_LE(crest, 3.917031131264696);
}

TEST(FitPowerLaw, ExactPowers) {
  std::vector<double> xs{1.0, 10.0, 100.0, 1000.0}, ys, zs;
  for (double x : xs) {
    ys.push_back(std::pow(x, 0.125));
    zs.push_back(3.0 * std::pow(x, 0.375));
  }
  const auto a = fit_power_law(xs, ys);
  EXPECT_NEAR(a.exponent, 0.125, 1e-12);
  EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
  const auto b = fit_power_law(xs, zs);
  EXPECT_NEAR(b.exponent, 0.375, 1e-12);
  EXPECT_NEAR(b.prefactor, 3.0, 1e-12);
}

TEST(FitPowerLaw, CrestBoundPreAsymptotic) {
  std::vector<double> xs{10.0, 100.0, 1000.0, 10000.0}, ys;
  for (double x : xs) ys.push_back(bounds::bound_crest_avg(1, x, kTwoPi) - 1.0);
  const auto fit = fit_power_law(xs, ys);
  EXPECT_GE(fit.exponent, 0.115);
  EXPECT_LE(fit.exponent, 0.125);
  EXPECT_NEAR(fit.exponent, 0.12411540, 1e-7);
}

TEST(FitPowerLaw, RejectsBadInput) {
  std::vector<double> two{1.0, 2.0};
  EXPECT_THROW(fit_power_law(two, two), std::invalid_argument);
  std::vector<double> xs{1.0, 2.0, 3.0}, ys{1.0, -1.0, 2.0};
  EXPECT_THROW(fit_power_law(xs, ys), std::invalid_argument);
}
