#pragma once

// Artifact writers: CSV tables, JSON documents and log-log SVG plots.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mkse/bounds.hpp"
#include "mkse/observables.hpp"
#include "mkse/sweep.hpp"

namespace mkse::report {

/// Shortest decimal text that round-trips the double ("%.17g").
std::string format_number(double v);

/// Columns: t,J0,J1,J2,J3,J4,sup,mean,J0_prime,crest.
void write_timeseries_csv(std::ostream& out, const ObservableSeries& series);
void write_timeseries_csv(const std::filesystem::path& path, const ObservableSeries& series);

nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const SweepResult& sweep);

/// Per-point aggregates and bounds; columns depend only on d and on whether
/// the sweep simulated.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep, int d);

/// Header of the `bounds` table for dimension d:
/// 1D: d,lambda,L,J0,J1,sup,crest_avg,J1_avg,J2_avg
/// 2D: d,lambda,L,J0,J1,J2,sup,crest_avg,J1_avg,J2_avg,J3_avg
std::vector<std::string> bound_columns(int d);
std::vector<double> bound_row(const bounds::BoundSet& b);

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
};

/// Log-log line plot with markers; nonpositive points are skipped.
void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::vector<PlotSeries>& series);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace mkse::report
