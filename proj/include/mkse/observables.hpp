#pragma once

// Trajectory statistics: J_0..J_4, the mean/fluctuation split, the crest
// factor C_f = L^{d/2} ||u||_∞ / J_0^{1/2}, tail limsup estimates, time
// averages and log-log power-law fits.

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mkse/spectral.hpp"

namespace mkse {

/// One sample of a trajectory. `mean` is the spatial average u*, and
/// J0_prime = ||u - u*||_2^2. `crest` is NaN when J_0 = 0.
struct ObservableRow {
  double t = 0.0;
  std::array<double, 5> J{};
  double sup_norm = 0.0;
  double mean = 0.0;
  double J0_prime = 0.0;
  double crest = 0.0;
};

enum class Column { J0, J1, J2, J3, J4, sup_norm, mean, J0_prime, crest };

inline constexpr std::array<Column, 9> kAllColumns{Column::J0,     Column::J1,      Column::J2,
                                                   Column::J3,     Column::J4,      Column::sup_norm,
                                                   Column::mean,   Column::J0_prime, Column::crest};

/// CSV header name of a column ("J0", ..., "sup", "mean", "J0_prime", "crest").
std::string column_name(Column c);
double column_value(const ObservableRow& row, Column c);

class ObservableSeries {
 public:
  ObservableSeries() = default;
  ObservableSeries(Grid grid, int refine) : grid_(grid), refine_(refine) {}

  /// Appends a row; times must be strictly increasing.
  void push_back(const ObservableRow& row);

  std::span<const ObservableRow> rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const ObservableRow& front() const { return rows_.front(); }
  const ObservableRow& back() const { return rows_.back(); }
  const Grid& grid() const { return grid_; }
  /// Refinement factor used for the sup-norm column.
  int refine() const { return refine_; }

 private:
  Grid grid_{1, 8, 1.0};
  int refine_ = 4;
  std::vector<ObservableRow> rows_;
};

ObservableRow record(const SpectralField& u_hat, double t, int refine = 4);

struct TailStat {
  double limsup = 0.0;        ///< max over samples with t > transient
  double time_average = 0.0;  ///< trapezoid mean over the same samples
};

struct TailStatistics {
  double transient = 0.0;
  std::size_t samples = 0;
  std::array<TailStat, kAllColumns.size()> columns{};

  const TailStat& operator[](Column c) const { return columns[std::size_t(c)]; }
};

/// Thrown when a statistic cannot be formed from the available samples.
class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requires at least 10 samples with t > transient.
TailStatistics tail_stats(const ObservableSeries& series, double transient);

/// Trapezoid time average of the crest column over t > transient. Throws
/// StatisticsError naming the time of any zero-energy sample.
double crest_time_average(const ObservableSeries& series, double transient);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Least-squares line through (log x, log y). Needs >= 3 positive pairs.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

}  // namespace mkse
