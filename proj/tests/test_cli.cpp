#include "oracles.hpp"

#include "torus_scatter/commands.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace torus_scatter;
using nlohmann::json;

namespace {

const std::string kData = std::string(TS_TEST_DIR) + "/data/";
const std::string kGolden = std::string(TS_TEST_DIR) + "/golden/";

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("config round trip") {
  for (const char* name : {"purple.json", "red.json", "causal.json", "ranges.json", "twod.json"}) {
    CAPTURE(name);
    const RunConfig c = load_config(kData + name);
    CHECK(parse_config(to_json(c)) == c);
  }
  const RunConfig purple = load_config(kData + "purple.json");
  CHECK(purple.family->table == SymmetryTable::T1);
  CHECK(purple.family->lambda == 1.0);
  CHECK(purple.p_grid.count == 201);
  CHECK(tolerance(purple, "symmetry") == 1e-10);
  CHECK_THROWS_AS(tolerance(purple, "nonsense"), std::exception);
}

TEST_CASE("config validation") {
  json base = json::parse(slurp(kData + "purple.json"));
  CHECK_NOTHROW(parse_config(base));

  json j = base;
  j["family"]["row"] = 9;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base;
  j["p_grid"]["count"] = 0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base;
  j["dimension"] = 4;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base;
  j["r0"] = 0.5;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base;
  j["tolerances"] = {{"bogus", 1.0}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = base;
  j["a0"] = "unitarity";
  j.erase("family");
  CHECK(parse_config(j).a0.unitarity);
  j = base;
  j["family"] = {{"table", "T1"}, {"row", 4}};
  j["a0"] = -1.0;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  CHECK_THROWS_AS(load_config(kData + "unknown_key.json"), ConfigError);
  CHECK_THROWS_AS(load_config(kData + "malformed.json"), ConfigError);
  CHECK_THROWS_AS(load_config(kData + "does_not_exist.json"), ConfigError);
}

TEST_CASE("golden files") {
  struct Golden {
    std::vector<std::string> args;
    std::string file;
  };
  const std::vector<Golden> cases{
      {{"traj", "--config", kData + "purple.json"}, "traj_purple.csv"},
      {{"traj", "--config", kData + "twod.json"}, "traj_twod.csv"},
      {{"ep", "--config", kData + "twod.json"}, "ep_twod.csv"},
      {{"poles", "--config", kData + "causal.json"}, "poles_causal.json"},
      {{"poles", "--a", "-1", "--lambda", "0.5"}, "poles_resonance.json"},
      {{"verify", "--config", kData + "purple.json", "--suite", "symmetry"}, "verify_purple_symmetry.json"},
  };
  for (const Golden& g : cases) {
    CAPTURE(g.file);
    const Outcome first = invoke(g.args);
    CHECK(first.code == 0);
    CHECK(first.out == slurp(kGolden + g.file));
    CHECK(invoke(g.args).out == first.out);
  }
}

TEST_CASE("trajectory CSV content") {
  const std::vector<std::string> rows = lines(invoke({"traj", "--config", kData + "purple.json"}).out);
  REQUIRE(rows.size() == 202);
  CHECK(rows[0] == "p,phi,theta,dphi_dp,dtheta_dp,kappa,V,quadrant");
  const std::vector<std::string> first = split(rows[1]);
  REQUIRE(first.size() == 8);
  CHECK(std::stod(first[0]) == 0.01);
  CHECK(std::stod(first[1]) == doctest::Approx(-2.0 * std::atan(0.01)).epsilon(1e-15));
  CHECK(std::stod(first[2]) == doctest::Approx(-2.0 * std::atan(0.05)).epsilon(1e-15));
  CHECK(std::stod(first[3]) == doctest::Approx(-2.0 / (1.0 + 1e-4)).epsilon(1e-15));
  CHECK(std::stod(first[6]) == doctest::Approx(5.0 / 36.0 * std::pow(std::tan(0.5 * (std::stod(first[1]) - std::stod(first[2]))), 2)));
  CHECK(first[7] == "bottom-left");

  // Two-point grid: header plus two rows; no closed-form potential for ranges.
  const std::vector<std::string> small = lines(invoke({"traj", "--config", kData + "small.json"}).out);
  CHECK(small.size() == 3);
  const std::vector<std::string> ranges = lines(invoke({"traj", "--config", kData + "ranges.json"}).out);
  REQUIRE(ranges.size() == 102);
  const std::vector<std::string> cells = split(ranges[5]);
  REQUIRE(cells.size() == 8);
  CHECK(cells[5].empty());
  CHECK(cells[6].empty());
}

TEST_CASE("output to a file") {
  const std::filesystem::path path = std::filesystem::temp_directory_path() / "torus_scatter_cli_test.csv";
  const Outcome o = invoke({"ep", "--config", kData + "twod.json", "--out", path.string()});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  CHECK(slurp(path.string()) == slurp(kGolden + "ep_twod.csv"));
  std::filesystem::remove(path);
  CHECK(invoke({"ep", "--config", kData + "twod.json", "--out", "/nonexistent/dir/x.csv"}).code == 2);
}

TEST_CASE("exit-code matrix") {
  struct Row {
    std::vector<std::string> args;
    int code;
    std::string kind;
  };
  const std::vector<Row> matrix{
      {{"verify", "--config", kData + "purple.json"}, 0, ""},
      {{"verify", "--config", kData + "purple.json", "--suite", "symmetry"}, 0, ""},
      {{"verify", "--config", kData + "purple.json", "--suite", "eom"}, 0, ""},
      {{"verify", "--config", kData + "red.json", "--suite", "symmetry"}, 0, ""},
      {{"verify", "--config", kData + "red.json", "--suite", "wigner"}, 1, ""},
      {{"verify", "--config", kData + "red.json"}, 1, ""},
      {{"verify", "--config", kData + "causal.json"}, 0, ""},
      {{"verify", "--config", kData + "twod.json", "--suite", "eom"}, 0, ""},
      {{"verify", "--config", kData + "purple.json", "--suite", "symmetry", "--tol", "1e-300"}, 1, ""},
      {{"verify", "--config", kData + "ranges.json", "--suite", "eom"}, 2, "inapplicable"},
      {{"verify", "--config", kData + "ranges.json", "--suite", "symmetry"}, 2, "inapplicable"},
      {{"verify", "--config", kData + "twod.json", "--suite", "wigner"}, 2, "inapplicable"},
      {{"verify", "--config", kData + "purple.json", "--suite", "poles"}, 2, "inapplicable"},
      {{"verify", "--config", kData + "unknown_key.json"}, 2, "config"},
      {{"verify", "--config", kData + "bad_grid.json"}, 2, "config"},
      {{"verify", "--config", kData + "malformed.json"}, 2, "config"},
      {{"verify", "--config", kData + "purple.json", "--tol", "-1"}, 2, "config"},
      {{"verify", "--config", kData + "purple.json", "--suite", "bogus"}, 2, "usage"},
      {{"verify"}, 2, "usage"},
      {{}, 2, "usage"},
      {{"frobnicate"}, 2, "usage"},
      {{"poles", "--a", "-1", "--lambda", "0.25"}, 0, ""},
      {{"poles", "--a", "-1", "--lambda", "-1"}, 2, "config"},
      {{"poles", "--a", "-1"}, 2, "config"},
      {{"poles", "--a", "0", "--r", "1"}, 2, "config"},
      {{"poles", "--config", kData + "purple.json"}, 2, "config"},
      {{"traj", "--config", kData + "bad_grid.json"}, 2, "config"},
  };
  for (const Row& row : matrix) {
    std::string joined;
    for (const std::string& a : row.args) joined += a + " ";
    CAPTURE(joined);
    const Outcome o = invoke(row.args);
    CHECK(o.code == row.code);
    if (row.code == 2) {
      const json e = json::parse(o.err);
      CHECK(e.at("kind") == row.kind);
      CHECK_FALSE(e.at("error").get<std::string>().empty());
    } else {
      CHECK(o.err.empty());
      if (row.args.front() == "verify") CHECK(json::parse(o.out).at("pass") == (row.code == 0));
    }
  }
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("verify report structure") {
  const json all = json::parse(invoke({"verify", "--config", kData + "purple.json"}).out);
  CHECK(all.at("suite") == "all");
  std::vector<std::string> ran, skipped;
  for (const json& s : all.at("suites")) ran.push_back(s.at("suite"));
  for (const json& s : all.at("skipped")) skipped.push_back(s.at("suite"));
  CHECK(ran == std::vector<std::string>{"symmetry", "eom", "wigner", "ep"});
  CHECK(skipped == std::vector<std::string>{"poles"});

  const json sym = json::parse(invoke({"verify", "--config", kData + "purple.json", "--suite", "symmetry"}).out);
  CHECK(sym.at("details").at("relation") == "phi -> -pi-theta, theta -> -pi-phi");
  for (const json& c : sym.at("checks")) CHECK(c.at("max_deviation").get<double>() <= c.at("tolerance").get<double>());

  const json wig = json::parse(invoke({"verify", "--config", kData + "red.json", "--suite", "wigner"}).out);
  CHECK(wig.at("details").at("tangent_violations").get<int>() > 0);
}
