#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "mkse/sweep.hpp"

namespace mkse {
namespace {

using nlohmann::json;

void reject_unknown(const json& section, const std::string& prefix,
                    const std::set<std::string>& allowed) {
  if (!section.is_object()) throw ConfigError(prefix, "expected an object");
  for (const auto& [key, value] : section.items())
    if (!allowed.contains(key)) throw ConfigError(prefix + "." + key, "unknown field");
}

double number_at(const json& section, const std::string& prefix, const std::string& key,
                 double fallback) {
  if (!section.contains(key)) return fallback;
  const json& v = section.at(key);
  if (!v.is_number()) throw ConfigError(prefix + "." + key, "expected a number");
  return v.get<double>();
}

std::int64_t integer_at(const json& section, const std::string& prefix, const std::string& key,
                        std::int64_t fallback) {
  if (!section.contains(key)) return fallback;
  const json& v = section.at(key);
  if (!v.is_number_integer()) throw ConfigError(prefix + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

const json& section_or_empty(const json& doc, const std::string& key) {
  static const json empty = json::object();
  return doc.contains(key) ? doc.at(key) : empty;
}

double length_value(const json& v, const std::string& field) {
  try {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_length(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
  throw ConfigError(field, "expected a number or a string such as \"2pi\"");
}

}  // namespace

double parse_length(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s.erase(s.size() - 2);
    if (!s.empty() && s.back() == '*') s.pop_back();
    if (s.empty()) return factor;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse length '" + text + "'");
  }
  if (used != s.size()) throw std::invalid_argument("cannot parse length '" + text + "'");
  return value * factor;
}

void RunConfig::validate() const {
  solver.validate();
  const double tail = solver.t_end - solver.transient;
  if (tail / solver.sample_every < 10.0 - 1e-9)
    throw ConfigError("dynamics.transient",
                      "leaves fewer than 10 samples between transient and t_end");
  if (refine < 1) throw ConfigError("output.refine", "must be >= 1");
  if (sweep) {
    if (sweep->parameter != "lambda" && sweep->parameter != "L")
      throw ConfigError("sweep.parameter", "must be \"lambda\" or \"L\"");
    if (sweep->values.empty()) throw ConfigError("sweep.values", "must not be empty");
    for (double v : sweep->values)
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("sweep.values", "values must be > 0");
    if (sweep->seeds.empty()) throw ConfigError("sweep.seeds", "must not be empty");
  }
  for (const auto& f : output.formats)
    if (f != "csv" && f != "json" && f != "svg")
      throw ConfigError("output.formats", "unknown format '" + f + "'");
}

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
  reject_unknown(doc, "config", {"grid", "dynamics", "init", "sweep", "output"});

  const json& grid = section_or_empty(doc, "grid");
  reject_unknown(grid, "grid", {"d", "N", "L"});
  const auto d = integer_at(grid, "grid", "d", 1);
  if (d != 1 && d != 2) throw ConfigError("grid.d", "must be 1 or 2");
  const auto n = integer_at(grid, "grid", "N", d == 1 ? 128 : 64);
  const double L = grid.contains("L") ? length_value(grid.at("L"), "grid.L") : 2.0 * std::numbers::pi;

  RunConfig cfg;
  try {
    cfg.solver.grid = Grid(int(d), int(n), L);
  } catch (const PreconditionError& e) {
    const std::string what = e.what();
    throw ConfigError(what.find("length") != std::string::npos ? "grid.L" : "grid.N", what);
  }

  const json& dyn = section_or_empty(doc, "dynamics");
  reject_unknown(dyn, "dynamics",
                 {"lambda", "dt", "t_end", "transient", "sample_every", "nonlinearity"});
  SolverConfig& s = cfg.solver;
  s.lambda = number_at(dyn, "dynamics", "lambda", 1.0);
  s.dt = number_at(dyn, "dynamics", "dt", d == 1 ? 0.005 : 0.01);
  s.t_end = number_at(dyn, "dynamics", "t_end", d == 1 ? 200.0 : 100.0);
  s.transient = number_at(dyn, "dynamics", "transient", 0.5 * s.t_end);
  s.sample_every = number_at(dyn, "dynamics", "sample_every", 0.1);
  if (dyn.contains("nonlinearity")) {
    if (!dyn.at("nonlinearity").is_string())
      throw ConfigError("dynamics.nonlinearity", "expected a string");
    s.nonlinearity = parse_nonlinearity(dyn.at("nonlinearity").get<std::string>());
  }

  const json& init = section_or_empty(doc, "init");
  reject_unknown(init, "init", {"seed", "amplitude", "decay"});
  const auto seed = integer_at(init, "init", "seed", 0);
  if (seed < 0) throw ConfigError("init.seed", "must be >= 0");
  s.seed = std::uint64_t(seed);
  s.amplitude = number_at(init, "init", "amplitude", 1.0);
  s.decay = number_at(init, "init", "decay", 3.0);

  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    reject_unknown(sw, "sweep", {"parameter", "values", "seeds"});
    SweepSpec spec;
    if (sw.contains("parameter")) {
      if (!sw.at("parameter").is_string()) throw ConfigError("sweep.parameter", "expected a string");
      spec.parameter = sw.at("parameter").get<std::string>();
    }
    if (!sw.contains("values") || !sw.at("values").is_array())
      throw ConfigError("sweep.values", "expected an array");
    for (const auto& v : sw.at("values")) spec.values.push_back(length_value(v, "sweep.values"));
    if (sw.contains("seeds")) {
      if (!sw.at("seeds").is_array()) throw ConfigError("sweep.seeds", "expected an array");
      for (const auto& v : sw.at("seeds")) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
          throw ConfigError("sweep.seeds", "expected non-negative integers");
        spec.seeds.push_back(v.get<std::uint64_t>());
      }
    } else {
      spec.seeds = {s.seed};
    }
    cfg.sweep = std::move(spec);
  }

  const json& out = section_or_empty(doc, "output");
  reject_unknown(out, "output", {"directory", "formats", "refine"});
  if (out.contains("directory")) {
    if (!out.at("directory").is_string()) throw ConfigError("output.directory", "expected a string");
    cfg.output.directory = out.at("directory").get<std::string>();
  }
  if (out.contains("formats")) {
    if (!out.at("formats").is_array()) throw ConfigError("output.formats", "expected an array");
    cfg.output.formats.clear();
    for (const auto& f : out.at("formats")) {
      if (!f.is_string()) throw ConfigError("output.formats", "expected strings");
      cfg.output.formats.push_back(f.get<std::string>());
    }
  }
  cfg.refine = int(integer_at(out, "output", "refine", 4));

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const RunConfig& cfg) {
  const SolverConfig& s = cfg.solver;
  json doc;
  doc["grid"] = {{"d", s.grid.dim()}, {"N", s.grid.n()}, {"L", s.grid.length()}};
  doc["dynamics"] = {{"lambda", s.lambda},       {"dt", s.dt},
                     {"t_end", s.t_end},         {"transient", s.transient},
                     {"sample_every", s.sample_every}, {"nonlinearity", to_string(s.nonlinearity)}};
  doc["init"] = {{"seed", s.seed}, {"amplitude", s.amplitude}, {"decay", s.decay}};
  if (cfg.sweep)
    doc["sweep"] = {{"parameter", cfg.sweep->parameter},
                    {"values", cfg.sweep->values},
                    {"seeds", cfg.sweep->seeds}};
  doc["output"] = {{"directory", cfg.output.directory},
                   {"formats", cfg.output.formats},
                   {"refine", cfg.refine}};
  return doc;
}

}  // namespace mkse
