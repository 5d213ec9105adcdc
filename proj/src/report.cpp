#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mkse/report.hpp"

namespace mkse::report {
namespace {

using nlohmann::json;

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// JSON has no NaN; missing values become null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json fit_json(const PowerLawFit& f) {
  return {{"exponent", f.exponent}, {"prefactor", f.prefactor}, {"r_squared", f.r_squared}};
}

json bound_set_json(const bounds::BoundSet& b) {
  json j = {{"J0", b.J0}, {"J1", b.J1}, {"sup", b.sup}, {"crest_avg", b.crest_avg},
            {"J1_avg", b.J1_time_avg}, {"J2_avg", b.J2_time_avg}};
  if (b.J2) j["J2"] = *b.J2;
  if (b.J3_time_avg) j["J3_avg"] = *b.J3_time_avg;
  return j;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_timeseries_csv(std::ostream& out, const ObservableSeries& series) {
  out << "t";
  for (Column c : kAllColumns) out << ',' << column_name(c);
  out << '\n';
  for (const auto& row : series.rows()) {
    out << format_number(row.t);
    for (Column c : kAllColumns) out << ',' << format_number(column_value(row, c));
    out << '\n';
  }
}

void write_timeseries_csv(const std::filesystem::path& path, const ObservableSeries& series) {
  auto out = open_for_write(path);
  write_timeseries_csv(out, series);
}

json to_json(const BoundReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"name", e.name},
                       {"observed", number_or_null(e.observed)},
                       {"bound", e.bound},
                       {"margin", number_or_null(e.margin())},
                       {"verdict", e.pass() ? "pass" : "fail"}});
  return {{"d", report.d},           {"lambda", report.lambda},
          {"L", report.L},           {"seed", report.seed},
          {"all_pass", report.all_pass()}, {"entries", entries}};
}

json to_json(const SweepResult& sweep) {
  json points = json::array();
  for (const auto& p : sweep.points) {
    json j = {{"value", p.value}, {"bounds", bound_set_json(p.bounds)}};
    if (!sweep.bound_only) {
      j["runs"] = p.runs;
      j["J0_max"] = p.J0_max;
      j["J1_max"] = p.J1_max;
      if (p.J2_max) j["J2_max"] = *p.J2_max;
      j["sup_max"] = p.sup_max;
      j["crest_avg_max"] = number_or_null(p.crest_avg_max);
      j["all_pass"] = p.all_pass;
    }
    points.push_back(j);
  }
  json fits = json::object();
  for (const auto& [name, f] : sweep.fits) fits[name] = fit_json(f);
  return {{"parameter", sweep.parameter},
          {"bound_only", sweep.bound_only},
          {"points", points},
          {"fits", fits}};
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, int d) {
  std::vector<std::string> header{sweep.parameter};
  if (!sweep.bound_only) {
    header.insert(header.end(), {"runs", "J0_max", "J1_max"});
    if (d == 2) header.push_back("J2_max");
    header.insert(header.end(), {"sup_max", "crest_avg_max", "all_pass"});
  }
  for (const auto& c : bound_columns(d))
    if (c != "d") header.push_back("bound_" + c);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& p : sweep.points) {
    out << format_number(p.value);
    if (!sweep.bound_only) {
      out << ',' << p.runs << ',' << format_number(p.J0_max) << ',' << format_number(p.J1_max);
      if (d == 2) out << ',' << format_number(p.J2_max.value_or(std::nan("")));
      out << ',' << format_number(p.sup_max) << ',' << format_number(p.crest_avg_max) << ','
          << (p.all_pass ? 1 : 0);
    }
    const auto row = bound_row(p.bounds);
    for (std::size_t i = 1; i < row.size(); ++i) out << ',' << format_number(row[i]);
    out << '\n';
  }
}

std::vector<std::string> bound_columns(int d) {
  if (d == 2)
    return {"d", "lambda", "L", "J0", "J1", "J2", "sup", "crest_avg", "J1_avg", "J2_avg", "J3_avg"};
  return {"d", "lambda", "L", "J0", "J1", "sup", "crest_avg", "J1_avg", "J2_avg"};
}

std::vector<double> bound_row(const bounds::BoundSet& b) {
  std::vector<double> row{double(b.d), b.lambda, b.L, b.J0, b.J1};
  if (b.d == 2) row.push_back(b.J2.value_or(std::nan("")));
  row.insert(row.end(), {b.sup, b.crest_avg, b.J1_time_avg, b.J2_time_avg});
  if (b.d == 2) row.push_back(b.J3_time_avg.value_or(std::nan("")));
  return row;
}

void write_loglog_svg(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::vector<PlotSeries>& series) {
  constexpr double width = 640, height = 440, left = 70, right = 160, top = 40, bottom = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                 "#9467bd", "#8c564b", "#17becf"};
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0) || !std::isfinite(s.ys[i])) continue;
      x_lo = std::min(x_lo, std::log10(s.xs[i]));
      x_hi = std::max(x_hi, std::log10(s.xs[i]));
      y_lo = std::min(y_lo, std::log10(s.ys[i]));
      y_hi = std::max(y_hi, std::log10(s.ys[i]));
    }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi - x_lo < 1e-12) x_lo -= 0.5, x_hi += 0.5;
  if (y_hi - y_lo < 1e-12) y_lo -= 0.5, y_hi += 0.5;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double lx) { return left + (lx - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double ly) { return top + (y_hi - ly) / (y_hi - y_lo) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int e = int(std::ceil(x_lo)); e <= int(std::floor(x_hi)); ++e)
    svg << "<text x=\"" << px(e) << "\" y=\"" << top + ph + 18
        << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  for (int e = int(std::ceil(y_lo)); e <= int(std::floor(y_hi)); ++e)
    svg << "<text x=\"" << left - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e
        << "</text>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % std::size(colors)];
    std::ostringstream points;
    std::ostringstream markers;
    for (std::size_t i = 0; i < std::min(s.xs.size(), s.ys.size()); ++i) {
      if (!(s.xs[i] > 0.0) || !(s.ys[i] > 0.0) || !std::isfinite(s.ys[i])) continue;
      const double x = px(std::log10(s.xs[i])), y = py(std::log10(s.ys[i]));
      points << x << ',' << y << ' ';
      markers << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"" << color
              << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
        << points.str() << "\"/>\n"
        << markers.str();
    const double ly = top + 14 + 18 * double(k);
    svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  auto out = open_for_write(path);
  out << svg.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
}

}  // namespace mkse::report
