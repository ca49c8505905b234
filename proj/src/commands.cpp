#include "torus_scatter/commands.hpp"

#include "torus_scatter/geometry_dynamics.hpp"
#include "torus_scatter/spin_algebra.hpp"
#include "torus_scatter/torus_trajectory.hpp"
#include "torus_scatter/uvir_symmetry.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace torus_scatter {

using nlohmann::json;

namespace {

std::string fmt17(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

double tol_for(const RunConfig& config, const std::string& name, std::optional<double> tol_override) {
  return tol_override ? *tol_override : tolerance(config, name);
}

std::vector<ProductState> in_states(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<ProductState> states;
  for (std::size_t i = 0; i < count; ++i) states.push_back(haar_product_state(rng));
  return states;
}

VerificationReport symmetry_suite(const RunConfig& config, std::optional<double> tol) {
  const TwoChannelModel model = build_model(config);
  if (model.dimension() == 3 && !model.family) {
    throw InapplicableSuite("symmetry suite needs a family (table, row, lambda) in 3D");
  }
  const std::vector<double> grid = build_grid(config);
  VerificationReport report{"symmetry", {}, json::object()};

  const PhaseMapReport phases = verify_phase_map(model, grid, tol_for(config, "symmetry", tol));
  report.checks.push_back(phases.check);
  report.details["relation"] = phases.relation;
  report.details["worst_p"] = phases.worst_p;

  const DensityMapReport rho =
      verify_density_map(model, in_states(config.seed, 5), grid, tol_for(config, "density", tol));
  report.checks.push_back(rho.check);
  report.details["rho_class"] = to_string(rho.rho_class);
  if (rho.rho_class == RhoClass::SingletRhoTripletRhoBar || rho.rho_class == RhoClass::TripletRhoSingletRhoBar) {
    report.details["cross_block_vs_rho"] = rho.cross_block_vs_rho;
    report.details["cross_block_vs_rhobar"] = rho.cross_block_vs_rhobar;
  }

  // Entanglement power depends on theta - phi only, so it is an invariant
  // exactly when the map preserves or negates that difference.
  const CheckResult ep = verify_ep_invariance(model, grid, tol_for(config, "ep_invariance", tol));
  if (rho_class_from_phase_difference(expected_map(model))) {
    report.checks.push_back(ep);
  } else {
    report.details["ep_change_not_invariant"] = ep.max_deviation;
  }
  return report;
}

VerificationReport eom_suite(const RunConfig& config, std::optional<double> tol) {
  const TwoChannelModel model = build_model(config);
  const std::vector<double> grid = build_grid(config);
  VerificationReport report{"eom", {}, json::object()};
  if (model.dimension() == 2) {
    const Channels2D& ch = model.two();
    if (ch.singlet.a2 == ch.triplet.a2) {
      throw InapplicableSuite("equal 2D scattering lengths: geodesic, no geometric potential");
    }
    if (ch.singlet.sigma2 != 0.0 || ch.triplet.sigma2 != 0.0) {
      throw InapplicableSuite("the 2D geometric potential is known only for sigma0 = sigma1 = 0");
    }
    const OverdeterminationReport od = overdetermination_2d(model, config.c1, grid);
    report.checks.push_back(make_check("overdetermination", od.max_deviation, tol_for(config, "overdetermination", tol)));
    report.checks.push_back({"lapse_squared_positive", od.min_lapse_squared, 0.0, od.min_lapse_squared > 0.0});
    report.details["excluded"] = od.excluded_p.size();
    return report;
  }
  if (!model.family) throw InapplicableSuite("eom suite needs a family with a solvable potential");
  SolvableSystem sys;
  try {
    sys = solvable_system(model, config.c1);
  } catch (const std::invalid_argument& e) {
    throw InapplicableSuite(std::string("no closed-form potential for this family: ") + e.what());
  }
  const ResidualReport res = eom_residual(model, sys.potential, sys.lapse, grid);
  report.checks.push_back(make_check("eom_residual", res.max_norm, tol_for(config, "eom", tol)));
  report.details["potential"] = sys.kind;
  report.details["excluded_p"] = res.excluded_p;
  return report;
}

VerificationReport wigner_suite(const RunConfig& config, std::optional<double> tol) {
  const TwoChannelModel model = build_model(config);
  if (model.dimension() != 3) throw InapplicableSuite("wigner suite applies to 3D zero-range models");
  const Trajectory traj = sample_trajectory(model, build_grid(config));
  VerificationReport report{"wigner", {}, json::object()};

  const double t = tol_for(config, "tangent", tol);
  const TangentAudit tangent = tangent_vector_audit(traj, t);
  report.checks.push_back({"tangent_vector", std::max(0.0, -tangent.worst_scaled_margin), t,
                           tangent.violations.empty()});
  json violations = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(tangent.violations.size(), 20); ++i) {
    const TangentViolation& v = tangent.violations[i];
    violations.push_back({{"p", v.p}, {"channel", to_string(v.channel)}, {"margin", v.margin}});
  }
  report.details["tangent_violations"] = tangent.violations.size();
  report.details["first_violations"] = violations;

  const QuadrantExitAudit exits = quadrant_exit_audit(traj);
  report.checks.push_back(make_check("quadrant_exits", static_cast<double>(exits.forbidden), 0.0));
  json crossings = json::array();
  for (const QuadrantCrossing& c : exits.crossings) {
    crossings.push_back({{"p", c.p}, {"edge", to_string(c.edge)}, {"allowed", c.allowed}});
  }
  report.details["crossings"] = crossings;
  return report;
}

VerificationReport poles_suite(const RunConfig& config, std::optional<double> tol) {
  VerificationReport report{"poles", {}, json::object()};
  if (config.poles) {
    const PoleConfig& pc = *config.poles;
    const double r = pc.r ? *pc.r : 2.0 * pc.a * *pc.lambda;
    const PoleSet numeric = poles_numeric(pc.a, r);
    if (pc.lambda) {
      const PoleSet closed = poles_closed_form(pc.a, *pc.lambda);
      report.checks.push_back(
          make_check("closed_vs_numeric", pole_set_distance(closed, numeric), tol_for(config, "poles", tol)));
    }
    if (numeric.kind == PoleCase::OutOfScope) {
      report.details["judged"] = false;
    } else {
      report.checks.push_back(verify_lower_half(numeric));
    }
    report.details["report"] = pole_report(pc);
    if (report.checks.empty()) throw InapplicableSuite("r = 0 pole is outside the causal-model scope");
    return report;
  }
  const TwoChannelModel model = build_model(config);
  if (model.dimension() != 3) throw InapplicableSuite("poles suite needs a 3D model or a 'poles' section");
  const Channels3D& ch = model.three();
  json channels = json::array();
  for (const auto& [name, c] : {std::pair{"singlet", ch.singlet}, std::pair{"triplet", ch.triplet}}) {
    if (c.unitarity || c.r == 0.0) continue;
    CheckResult lower = verify_lower_half(poles_numeric(c.a, c.r));
    lower.name = std::string(name) + "_lower_half";
    report.checks.push_back(lower);
    channels.push_back(pole_report(PoleConfig{c.a, std::nullopt, c.r}));
  }
  if (report.checks.empty()) {
    throw InapplicableSuite("no channel with a non-zero effective range; poles are outside the causal-model scope");
  }
  report.details["channels"] = channels;
  return report;
}

VerificationReport ep_suite(const RunConfig& config, std::optional<double> tol) {
  const TwoChannelModel model = build_model(config);
  const std::vector<double> grid = build_grid(config);
  const std::size_t samples = config.ep_samples.value_or(20000);
  const std::size_t points = std::min<std::size_t>(5, grid.size());
  VerificationReport report{"ep", {}, json::object()};
  double worst = 0.0;
  json rows = json::array();
  for (std::size_t k = 0; k < points; ++k) {
    const std::size_t i = points == 1 ? 0 : k * (grid.size() - 1) / (points - 1);
    const PhasePair x = phase_shifts(model, grid[i]).unwrapped;
    const double closed = entanglement_power_closed(x.phi, x.theta);
    const MonteCarloEstimate mc = entanglement_power_mc(x.phi, x.theta, samples, config.seed + k);
    const double z = std::abs(mc.mean - closed) / mc.standard_error;
    worst = std::max(worst, z);
    rows.push_back({{"p", grid[i]}, {"closed", closed}, {"mc", mc.mean}, {"stderr", mc.standard_error}});
  }
  report.checks.push_back(make_check("ep_closed_vs_mc_sigmas", worst, tol_for(config, "ep_sigmas", tol)));
  report.details["points"] = rows;
  report.details["samples"] = samples;
  return report;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", message}, {"kind", kind}};
}

}  // namespace

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

json to_json(const CheckResult& c) {
  return {{"name", c.name}, {"max_deviation", c.max_deviation}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const CheckResult& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}, {"details", r.details}};
}

VerificationReport run_suite(const RunConfig& config, const std::string& suite, std::optional<double> tol) {
  try {
    if (suite == "symmetry") return symmetry_suite(config, tol);
    if (suite == "eom") return eom_suite(config, tol);
    if (suite == "wigner") return wigner_suite(config, tol);
    if (suite == "poles") return poles_suite(config, tol);
    if (suite == "ep") return ep_suite(config, tol);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown suite '" + suite + "'");
}

json run_all_suites(const RunConfig& config, std::optional<double> tol, bool& pass) {
  json suites = json::array();
  json skipped = json::array();
  pass = true;
  for (const char* name : {"symmetry", "eom", "wigner", "poles", "ep"}) {
    try {
      const VerificationReport r = run_suite(config, name, tol);
      pass = pass && r.pass();
      suites.push_back(to_json(r));
    } catch (const InapplicableSuite& e) {
      skipped.push_back({{"suite", name}, {"reason", e.what()}});
    }
  }
  if (suites.empty()) throw InapplicableSuite("no suite applies to this configuration");
  return {{"suite", "all"}, {"pass", pass}, {"suites", suites}, {"skipped", skipped}};
}

void write_trajectory_csv(const RunConfig& config, std::ostream& out) {
  const TwoChannelModel model = build_model(config);
  const Trajectory traj = sample_trajectory(model, build_grid(config));

  std::optional<SolvableSystem> sys;
  std::optional<GeometricPotential> v2d;
  if (model.dimension() == 3) {
    try {
      sys = solvable_system(model, config.c1);
    } catch (const std::invalid_argument&) {
    }
  } else {
    const Channels2D& ch = model.two();
    if (ch.singlet.a2 != ch.triplet.a2 && ch.singlet.sigma2 == 0.0 && ch.triplet.sigma2 == 0.0) {
      v2d = potential_2d(ch.singlet.a2, ch.triplet.a2, config.c1);
    }
  }

  out << "p,phi,theta,dphi_dp,dtheta_dp,kappa,V,quadrant\n";
  for (const TrajectorySample& s : traj.samples) {
    std::string kappa, v;
    if (sys) {
      if (!sys->potential.singular_at(s.unwrapped.phi, s.unwrapped.theta)) {
        if (auto k = inaffinity(model, sys->lapse, s.p)) {
          kappa = fmt17(*k);
          v = fmt17(sys->potential.value(s.unwrapped.phi, s.unwrapped.theta));
        }
      }
    } else if (v2d) {
      const OverdeterminationReport od = overdetermination_2d(model, config.c1, {s.p});
      if (!od.samples.empty()) {
        kappa = fmt17(od.samples.front().kappa);
        v = fmt17(v2d->value(s.unwrapped.phi, s.unwrapped.theta));
      }
    }
    out << fmt17(s.p) << ',' << fmt17(s.point.phi) << ',' << fmt17(s.point.theta) << ',' << fmt17(s.tangent.phi)
        << ',' << fmt17(s.tangent.theta) << ',' << kappa << ',' << v << ',' << to_string(s.quadrant) << '\n';
  }
}

void write_ep_csv(const RunConfig& config, std::ostream& out) {
  const TwoChannelModel model = build_model(config);
  const std::vector<double> grid = build_grid(config);
  out << "p,phi,theta,ep";
  if (config.ep_samples) out << ",ep_mc,ep_mc_stderr";
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PhasePair x = phase_shifts(model, grid[i]).unwrapped;
    const TorusPoint pt = TorusPoint::from(x);
    out << fmt17(grid[i]) << ',' << fmt17(pt.phi) << ',' << fmt17(pt.theta) << ','
        << fmt17(entanglement_power_closed(x.phi, x.theta));
    if (config.ep_samples) {
      const MonteCarloEstimate mc = entanglement_power_mc(x.phi, x.theta, *config.ep_samples, config.seed + i);
      out << ',' << fmt17(mc.mean) << ',' << fmt17(mc.standard_error);
    }
    out << '\n';
  }
}

json pole_report(const PoleConfig& pc) {
  PoleSet set;
  json j{{"a", pc.a}};
  if (pc.lambda) {
    set = poles_closed_form(pc.a, *pc.lambda);
    j["lambda"] = *pc.lambda;
  } else {
    set = poles_numeric(pc.a, pc.r.value_or(0.0));
    j["r"] = pc.r.value_or(0.0);
  }
  json poles = json::array();
  for (const Pole& p : set.poles) poles.push_back({{"re", p.p.real()}, {"im", p.p.imag()}, {"mult", p.multiplicity}});
  j["case"] = to_string(set.kind);
  j["poles"] = poles;
  j["lower_half"] = verify_lower_half(set).pass;
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-channel s-wave S-matrix trajectories on the flat torus"};
  app.name("torus-scatter");
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all";
  double tol = 0.0, a = 0.0, lambda = 0.0, r = 0.0;

  auto* traj = app.add_subcommand("traj", "Write the trajectory CSV");
  traj->add_option("--config", config_path, "JSON run configuration")->required();
  traj->add_option("--out", out_path, "Output file (default: standard output)");

  auto* verify = app.add_subcommand("verify", "Run a verification suite and print a JSON report");
  verify->add_option("--config", config_path, "JSON run configuration")->required();
  verify->add_option("--suite", suite, "symmetry, eom, wigner, poles, ep or all")
      ->check(CLI::IsMember({"symmetry", "eom", "wigner", "poles", "ep", "all"}));
  CLI::Option* tol_opt = verify->add_option("--tol", tol, "Override every check tolerance");
  verify->add_option("--out", out_path, "Output file (default: standard output)");

  auto* poles = app.add_subcommand("poles", "Pole positions of S for a, lambda or a, r");
  poles->add_option("--config", config_path, "JSON run configuration with a 'poles' section");
  CLI::Option* a_opt = poles->add_option("--a", a, "Scattering length");
  CLI::Option* lambda_opt = poles->add_option("--lambda", lambda, "Family parameter (r = 2 a lambda)");
  CLI::Option* r_opt = poles->add_option("--r", r, "Effective range");
  poles->add_option("--out", out_path, "Output file (default: standard output)");

  auto* ep = app.add_subcommand("ep", "Write entanglement power along the trajectory as CSV");
  ep->add_option("--config", config_path, "JSON run configuration")->required();
  ep->add_option("--out", out_path, "Output file (default: standard output)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what()).dump() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << error_json("io", "cannot write '" + out_path + "'").dump() << '\n';
      return 2;
    }
  }
  std::ostream& sink = out_path.empty() ? out : file;

  try {
    if (*traj) {
      write_trajectory_csv(load_config(config_path), sink);
      return 0;
    }
    if (*ep) {
      write_ep_csv(load_config(config_path), sink);
      return 0;
    }
    if (*verify) {
      const RunConfig config = load_config(config_path);
      if (*tol_opt && !(tol > 0.0)) throw ConfigError("--tol must be positive");
      const std::optional<double> override_tol = *tol_opt ? std::optional<double>(tol) : std::nullopt;
      if (suite == "all") {
        bool pass = false;
        sink << run_all_suites(config, override_tol, pass).dump(2) << '\n';
        return pass ? 0 : 1;
      }
      const VerificationReport report = run_suite(config, suite, override_tol);
      sink << to_json(report).dump(2) << '\n';
      return report.pass() ? 0 : 1;
    }
    // poles
    PoleConfig pc;
    if (*a_opt) {
      if (!config_path.empty()) throw ConfigError("give either --config or --a, not both");
      if (static_cast<bool>(*lambda_opt) == static_cast<bool>(*r_opt)) {
        throw ConfigError("give exactly one of --lambda or --r");
      }
      pc.a = a;
      if (*lambda_opt) pc.lambda = lambda;
      if (*r_opt) pc.r = r;
      if (pc.a == 0.0 || !std::isfinite(pc.a)) throw ConfigError("--a must be finite and non-zero");
      if (pc.lambda && !(*pc.lambda > 0.0)) throw ConfigError("--lambda must be positive");
    } else {
      if (config_path.empty()) throw ConfigError("poles needs --a with --lambda or --r, or --config");
      const RunConfig config = load_config(config_path);
      if (!config.poles) throw ConfigError("config has no 'poles' section");
      pc = *config.poles;
    }
    sink << pole_report(pc).dump(2) << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << error_json("config", e.what()).dump() << '\n';
    return 2;
  } catch (const InapplicableSuite& e) {
    err << error_json("inapplicable", e.what()).dump() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << error_json("config", e.what()).dump() << '\n';
    return 2;
  }
}

}  // namespace torus_scatter
