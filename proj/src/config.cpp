#include "torus_scatter/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace torus_scatter {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing '" + key + "' in " + where);
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + key + "' in " + where + " must be finite");
  return x;
}

std::optional<double> optional_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return number(j, key, where);
}

std::uint64_t unsigned_integer(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_unsigned()) throw ConfigError("'" + key + "' in " + where + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

LengthSetting length(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing '" + key + "'");
  const json& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != "unitarity") throw ConfigError("'" + key + "' must be a number or \"unitarity\"");
    return {true, 0.0};
  }
  return {false, number(j, key, "config")};
}

json length_json(const LengthSetting& l) { return l.unitarity ? json("unitarity") : json(l.value); }

GridConfig parse_grid(const json& g) {
  if (!g.is_object()) throw ConfigError("'p_grid' must be an object");
  reject_unknown(g, {"min", "max", "count", "spacing"}, "p_grid");
  GridConfig out;
  out.min = number(g, "min", "p_grid");
  out.max = number(g, "max", "p_grid");
  if (!g.contains("count")) throw ConfigError("missing 'count' in p_grid");
  out.count = unsigned_integer(g, "count", "p_grid");
  const std::string spacing = g.value("spacing", std::string("log"));
  if (spacing == "log") {
    out.spacing = GridSpacing::Log;
  } else if (spacing == "linear") {
    out.spacing = GridSpacing::Linear;
  } else {
    throw ConfigError("p_grid.spacing must be \"log\" or \"linear\"");
  }
  if (!(out.min > 0.0)) throw ConfigError("p_grid.min must be positive");
  if (!(out.max > out.min)) throw ConfigError("p_grid.max must exceed p_grid.min");
  if (out.count < 2) throw ConfigError("p_grid.count must be at least 2");
  return out;
}

Family parse_family(const json& f) {
  if (!f.is_object()) throw ConfigError("'family' must be an object");
  reject_unknown(f, {"table", "row", "lambda"}, "family");
  Family out;
  if (!f.contains("table") || !f.at("table").is_string()) throw ConfigError("family.table must be a string");
  try {
    out.table = symmetry_table_from_string(f.at("table").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!f.contains("row") || !f.at("row").is_number_integer()) throw ConfigError("family.row must be an integer");
  out.row = f.at("row").get<int>();
  if (out.table == SymmetryTable::T1) {
    out.lambda = f.contains("lambda") ? number(f, "lambda", "family") : 1.0;
  } else {
    out.lambda = number(f, "lambda", "family");
  }
  return out;
}

PoleConfig parse_poles(const json& p) {
  if (!p.is_object()) throw ConfigError("'poles' must be an object");
  reject_unknown(p, {"a", "lambda", "r"}, "poles");
  PoleConfig out;
  out.a = number(p, "a", "poles");
  out.lambda = optional_number(p, "lambda", "poles");
  out.r = optional_number(p, "r", "poles");
  if (out.lambda.has_value() == out.r.has_value()) throw ConfigError("poles needs exactly one of 'lambda' or 'r'");
  if (out.a == 0.0) throw ConfigError("poles.a must be non-zero");
  if (out.lambda && !(*out.lambda > 0.0)) throw ConfigError("poles.lambda must be positive");
  return out;
}

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> defaults{
      {"symmetry", 1e-10},  {"density", 1e-10}, {"ep_invariance", 1e-12}, {"eom", 1e-8},
      {"overdetermination", 1e-6}, {"tangent", 1e-10}, {"poles", 1e-12}, {"ep_sigmas", 5.0},
  };
  return defaults;
}

double tolerance(const RunConfig& config, const std::string& name) {
  if (auto it = config.tolerances.find(name); it != config.tolerances.end()) return it->second;
  const auto& defaults = default_tolerances();
  if (auto it = defaults.find(name); it != defaults.end()) return it->second;
  throw std::invalid_argument("unknown tolerance '" + name + "'");
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown(j,
                 {"dimension", "a0", "a1", "r0", "r1", "sigma0", "sigma1", "family", "p_grid", "c1", "tolerances",
                  "seed", "poles", "ep_samples"},
                 "config");
  RunConfig c;
  if (!j.contains("dimension") || !j.at("dimension").is_number_integer()) {
    throw ConfigError("'dimension' must be 2 or 3");
  }
  c.dimension = j.at("dimension").get<int>();
  if (c.dimension != 2 && c.dimension != 3) throw ConfigError("'dimension' must be 2 or 3");
  c.a0 = length(j, "a0");
  c.a1 = length(j, "a1");
  c.r0 = optional_number(j, "r0", "config");
  c.r1 = optional_number(j, "r1", "config");
  c.sigma0 = optional_number(j, "sigma0", "config");
  c.sigma1 = optional_number(j, "sigma1", "config");
  if (j.contains("family")) c.family = parse_family(j.at("family"));
  if (!j.contains("p_grid")) throw ConfigError("missing 'p_grid'");
  c.p_grid = parse_grid(j.at("p_grid"));
  if (j.contains("c1")) c.c1 = number(j, "c1", "config");
  if (c.c1 == 0.0) throw ConfigError("c1 must be non-zero");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("'tolerances' must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!default_tolerances().count(key)) throw ConfigError("unknown tolerance '" + key + "'");
      const double tol = number(t, key, "tolerances");
      if (!(tol > 0.0)) throw ConfigError("tolerance '" + key + "' must be positive");
      c.tolerances[key] = tol;
    }
  }
  if (j.contains("seed")) c.seed = unsigned_integer(j, "seed", "config");
  if (j.contains("poles")) c.poles = parse_poles(j.at("poles"));
  if (j.contains("ep_samples")) {
    c.ep_samples = unsigned_integer(j, "ep_samples", "config");
    if (*c.ep_samples < 2) throw ConfigError("ep_samples must be at least 2");
  }

  if (c.dimension == 2) {
    if (c.a0.unitarity || c.a1.unitarity) throw ConfigError("2D scattering lengths cannot be \"unitarity\"");
    if (!(c.a0.value > 0.0) || !(c.a1.value > 0.0)) throw ConfigError("2D scattering lengths must be positive");
    if (c.r0 || c.r1) throw ConfigError("r0/r1 are 3D parameters; use sigma0/sigma1 in 2D");
    if (c.family) throw ConfigError("symmetry families are 3D; the 2D map needs no family");
  } else {
    if (c.sigma0 || c.sigma1) throw ConfigError("sigma0/sigma1 are 2D parameters");
    if (!c.a0.unitarity && c.a0.value == 0.0) throw ConfigError("a0 must be non-zero");
    if (!c.a1.unitarity && c.a1.value == 0.0) throw ConfigError("a1 must be non-zero");
    if (c.family) {
      if (c.r0 || c.r1) throw ConfigError("a family fixes the ranges; remove r0/r1");
      if (c.a0.unitarity || c.a1.unitarity) throw ConfigError("families need finite scattering lengths");
    }
  }
  build_model(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["dimension"] = c.dimension;
  j["a0"] = length_json(c.a0);
  j["a1"] = length_json(c.a1);
  if (c.r0) j["r0"] = *c.r0;
  if (c.r1) j["r1"] = *c.r1;
  if (c.sigma0) j["sigma0"] = *c.sigma0;
  if (c.sigma1) j["sigma1"] = *c.sigma1;
  if (c.family) {
    j["family"] = {{"table", to_string(c.family->table)}, {"row", c.family->row}, {"lambda", c.family->lambda}};
  }
  j["p_grid"] = {{"min", c.p_grid.min},
                 {"max", c.p_grid.max},
                 {"count", c.p_grid.count},
                 {"spacing", c.p_grid.spacing == GridSpacing::Log ? "log" : "linear"}};
  j["c1"] = c.c1;
  if (!c.tolerances.empty()) j["tolerances"] = c.tolerances;
  j["seed"] = c.seed;
  if (c.poles) {
    json p{{"a", c.poles->a}};
    if (c.poles->lambda) p["lambda"] = *c.poles->lambda;
    if (c.poles->r) p["r"] = *c.poles->r;
    j["poles"] = p;
  }
  if (c.ep_samples) j["ep_samples"] = *c.ep_samples;
  return j;
}

TwoChannelModel build_model(const RunConfig& c) {
  try {
    if (c.dimension == 2) {
      return TwoChannelModel::two_d({c.a0.value, c.sigma0.value_or(0.0)}, {c.a1.value, c.sigma1.value_or(0.0)});
    }
    if (c.family) {
      return make_symmetric_model(c.family->table, c.family->row, c.a0.value, c.a1.value, c.family->lambda);
    }
    auto channel = [](const LengthSetting& a, std::optional<double> r) {
      return a.unitarity ? Channel3D::at_unitarity(r.value_or(0.0)) : Channel3D{a.value, r.value_or(0.0), false};
    };
    return TwoChannelModel::three_d(channel(c.a0, c.r0), channel(c.a1, c.r1));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<double> build_grid(const RunConfig& c) {
  return momentum_grid(c.p_grid.min, c.p_grid.max, c.p_grid.count, c.p_grid.spacing);
}

}  // namespace torus_scatter
