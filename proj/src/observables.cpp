#include "mkse/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mkse {
namespace {

std::vector<const ObservableRow*> tail_rows(const ObservableSeries& series, double transient) {
  std::vector<const ObservableRow*> tail;
  for (const auto& row : series.rows())
    if (row.t > transient) tail.push_back(&row);
  if (tail.size() < 10)
    throw StatisticsError("tail statistics need at least 10 samples after t = " +
                          std::to_string(transient) + ", got " + std::to_string(tail.size()));
  return tail;
}

double trapezoid_average(const std::vector<const ObservableRow*>& tail, Column c) {
  double integral = 0.0;
  for (std::size_t i = 1; i < tail.size(); ++i)
    integral += 0.5 * (tail[i]->t - tail[i - 1]->t) *
                (column_value(*tail[i], c) + column_value(*tail[i - 1], c));
  return integral / (tail.back()->t - tail.front()->t);
}

}  // namespace

std::string column_name(Column c) {
  switch (c) {
    case Column::J0: return "J0";
    case Column::J1: return "J1";
    case Column::J2: return "J2";
    case Column::J3: return "J3";
    case Column::J4: return "J4";
    case Column::sup_norm: return "sup";
    case Column::mean: return "mean";
    case Column::J0_prime: return "J0_prime";
    case Column::crest: return "crest";
  }
  return "?";
}

double column_value(const ObservableRow& row, Column c) {
  switch (c) {
    case Column::J0:
    case Column::J1:
    case Column::J2:
    case Column::J3:
    case Column::J4: return row.J[std::size_t(c)];
    case Column::sup_norm: return row.sup_norm;
    case Column::mean: return row.mean;
    case Column::J0_prime: return row.J0_prime;
    case Column::crest: return row.crest;
  }
  return 0.0;
}

void ObservableSeries::push_back(const ObservableRow& row) {
  if (!rows_.empty() && !(row.t > rows_.back().t))
    throw std::invalid_argument("observable rows must have strictly increasing times");
  rows_.push_back(row);
}

ObservableRow record(const SpectralField& u_hat, double t, int refine) {
  const Grid& g = u_hat.grid();
  ObservableRow row;
  row.t = t;
  for (int s = 0; s < 5; ++s) row.J[s] = sobolev_seminorm(u_hat, s);
  row.sup_norm = sup_norm_estimate(u_hat, refine);
  row.mean = u_hat.at(0, 0).real();

  const double volume = std::pow(g.length(), g.dim());
  double fluctuation = 0.0;
  auto c = u_hat.coeffs();
  for (std::size_t i = 1; i < c.size(); ++i) fluctuation += std::norm(c[i]);
  row.J0_prime = volume * fluctuation;

  row.crest = row.J[0] > 0.0 ? std::sqrt(volume) * row.sup_norm / std::sqrt(row.J[0])
                             : std::numeric_limits<double>::quiet_NaN();
  return row;
}

TailStatistics tail_stats(const ObservableSeries& series, double transient) {
  const auto tail = tail_rows(series, transient);
  TailStatistics stats;
  stats.transient = transient;
  stats.samples = tail.size();
  for (Column c : kAllColumns) {
    TailStat& s = stats.columns[std::size_t(c)];
    s.limsup = -std::numeric_limits<double>::infinity();
    for (const auto* row : tail) s.limsup = std::max(s.limsup, column_value(*row, c));
    s.time_average = trapezoid_average(tail, c);
  }
  return stats;
}

double crest_time_average(const ObservableSeries& series, double transient) {
  const auto tail = tail_rows(series, transient);
  for (const auto* row : tail)
    if (!(row->J[0] > 0.0))
      throw StatisticsError("crest factor undefined: zero energy at t = " + std::to_string(row->t));
  return trapezoid_average(tail, Column::crest);
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (xs.size() < 3) throw std::invalid_argument("fit_power_law: need at least 3 points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
      throw std::invalid_argument("fit_power_law: inputs must be positive");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_power_law: x values are all equal");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(my - fit.exponent * mx);
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace mkse
