#include "torus_scatter/geometry_dynamics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace torus_scatter {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLapseFloor = 1e-10;
constexpr double kCosFloor = 1e-6;

void require_lengths(double a0, double a1, double c1) {
  if (a0 == 0.0 || a1 == 0.0) {
    throw std::invalid_argument("zero scattering length is the trivial fixed point; no potential is defined");
  }
  if (!std::isfinite(a0) || !std::isfinite(a1)) {
    throw std::invalid_argument("geometric potential needs finite scattering lengths");
  }
  if (c1 == 0.0 || !std::isfinite(c1)) throw std::invalid_argument("c1 must be finite and non-zero");
}

int epsilon_for(double a0, double a1) { return a0 * a1 > 0.0 ? -1 : +1; }

bool close_rel(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y)); }

const Channels3D& finite_channels(const TwoChannelModel& model) {
  const Channels3D& ch = model.three();
  if (ch.singlet.unitarity || ch.triplet.unitarity) {
    throw std::invalid_argument("no closed-form geometric potential for a channel at unitarity");
  }
  return ch;
}

double point_segment_distance(const PhasePair& x, const PhasePair& a, const PhasePair& b) {
  const double ux = b.phi - a.phi, uy = b.theta - a.theta;
  const double wx = x.phi - a.phi, wy = x.theta - a.theta;
  const double len2 = ux * ux + uy * uy;
  double t = len2 > 0.0 ? (wx * ux + wy * uy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(wx - t * ux, wy - t * uy);
}

double directed_hausdorff(const std::vector<PhasePair>& from, const std::vector<PhasePair>& to) {
  double worst = 0.0;
  for (const PhasePair& x : from) {
    double best = std::numeric_limits<double>::infinity();
    if (to.size() == 1) best = std::hypot(x.phi - to[0].phi, x.theta - to[0].theta);
    for (std::size_t i = 1; i < to.size(); ++i) best = std::min(best, point_segment_distance(x, to[i - 1], to[i]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

bool GeometricPotential::singular_at(double phi, double theta, double tol) const {
  return std::abs(std::cos(argument(phi, theta))) < tol;
}

GeometricPotential potential_3d(double a0, double a1, double c1) {
  require_lengths(a0, a1, c1);
  const double sum = std::abs(a0) + std::abs(a1);
  return {std::abs(a0 * a1) / (sum * sum * c1 * c1), epsilon_for(a0, a1), 0.5, 0.0, c1};
}

GeometricPotential potential_lam14(double a0, double a1, double c1) {
  GeometricPotential v = potential_3d(a0, a1, c1);
  v.amplitude *= 0.5;
  v.scale = 0.25;
  return v;
}

GeometricPotential potential_lam14(const TwoChannelModel& model, double c1) {
  const Channels3D& ch = finite_channels(model);
  const auto& f = model.family;
  if (!f || f->table == SymmetryTable::T1 || (f->row != 5 && f->row != 6)) {
    throw std::invalid_argument("lambda = 1/4 potential needs a T2/T3 row 5 or 6 family");
  }
  if (std::abs(f->lambda - 0.25) > 1e-12) {
    throw std::invalid_argument("closed-form potential only for lambda = 1/4; the general solution is out of scope");
  }
  if (!close_rel(ch.singlet.r, 0.5 * ch.singlet.a, 1e-12) || !close_rel(ch.triplet.r, 0.5 * ch.triplet.a, 1e-12)) {
    throw std::invalid_argument(
        "lambda = 1/4 potential solves the trajectory equations only for the double-pole ranges r_s = a_s/2 "
        "(row 6 with a0 a1 > 0, row 5 with a0 a1 < 0)");
  }
  return potential_lam14(ch.singlet.a, ch.triplet.a, c1);
}

GeometricPotential potential_2d(double a2_0, double a2_1, double c1) {
  if (!(a2_0 > 0.0) || !(a2_1 > 0.0)) throw std::invalid_argument("2D scattering lengths must be positive");
  if (c1 == 0.0 || !std::isfinite(c1)) throw std::invalid_argument("c1 must be finite and non-zero");
  const double l = std::log(a2_0 / a2_1);
  if (l == 0.0) {
    throw std::invalid_argument("equal 2D scattering lengths: the trajectory is a geodesic and no potential is needed");
  }
  return {-kPi * kPi / (4.0 * l * l * c1 * c1), +1, 0.5, 0.5 * kPi, c1};
}

LapseSpec lapse_spec_3d(double a0, double a1, double c1) {
  require_lengths(a0, a1, c1);
  return {1.0, epsilon_for(a0, a1), 1.0, c1};
}

LapseSpec lapse_spec_lam14(double a0, double a1, double c1) {
  require_lengths(a0, a1, c1);
  return {2.0 * std::numbers::sqrt2, epsilon_for(a0, a1), 0.5, c1};
}

double lapse(const TwoChannelModel& model, const LapseSpec& spec, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lapse needs p > 0");
  const PhasePair x = phase_shifts(model, p).unwrapped;
  return spec.value(x.phi, x.theta, p);
}

double lapse_3d(const TwoChannelModel& model, double p, double c1) {
  const Channels3D& ch = finite_channels(model);
  return lapse(model, lapse_spec_3d(ch.singlet.a, ch.triplet.a, c1), p);
}

double lapse_lam14(const TwoChannelModel& model, double p, double c1) {
  potential_lam14(model, c1);
  const Channels3D& ch = model.three();
  return lapse(model, lapse_spec_lam14(ch.singlet.a, ch.triplet.a, c1), p);
}

std::optional<double> inaffinity(const TwoChannelModel& model, const LapseSpec& spec, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("inaffinity needs p > 0");
  const PhaseJets j = phase_jets(model, p);
  const Jet n = spec.value(j.phi, j.theta, Jet::variable(p));
  if (std::abs(n.v) < kLapseFloor) return std::nullopt;
  return n.d1 / n.v;
}

SolvableSystem solvable_system(const TwoChannelModel& model, double c1) {
  if (model.dimension() != 3) {
    throw std::invalid_argument("closed-form potential and lapse exist only for 3D models");
  }
  const Channels3D& ch = finite_channels(model);
  if (ch.singlet.r == 0.0 && ch.triplet.r == 0.0) {
    return {potential_3d(ch.singlet.a, ch.triplet.a, c1), lapse_spec_3d(ch.singlet.a, ch.triplet.a, c1),
            "scattering-length"};
  }
  GeometricPotential v = potential_lam14(model, c1);
  return {v, lapse_spec_lam14(ch.singlet.a, ch.triplet.a, c1), "lambda-1/4"};
}

ResidualReport eom_residual(const TwoChannelModel& model, const GeometricPotential& potential,
                            const LapseSpec& lapse_spec, const std::vector<double>& p_grid) {
  ResidualReport report;
  for (double p : p_grid) {
    if (!(p > 0.0)) throw std::invalid_argument("residual grid must be positive");
    const PhaseJets j = phase_jets(model, p);
    const Jet n = lapse_spec.value(j.phi, j.theta, Jet::variable(p));
    if (std::abs(n.v) < kLapseFloor || potential.singular_at(j.phi.v, j.theta.v, kCosFloor)) {
      report.excluded_p.push_back(p);
      continue;
    }
    const double kappa = n.d1 / n.v;
    const auto [gphi, gtheta] = potential.gradient(j.phi.v, j.theta.v);
    const double n2 = n.v * n.v;
    ResidualSample s{p, j.phi.d2 - kappa * j.phi.d1 + n2 * gphi, j.theta.d2 - kappa * j.theta.d1 + n2 * gtheta};
    report.max_norm = std::max({report.max_norm, std::abs(s.res_phi), std::abs(s.res_theta)});
    report.samples.push_back(s);
  }
  return report;
}

OverdeterminationReport overdetermination_2d(const TwoChannelModel& model, double c1,
                                             const std::vector<double>& p_grid) {
  const Channels2D& ch = model.two();
  const GeometricPotential v = potential_2d(ch.singlet.a2, ch.triplet.a2, c1);
  OverdeterminationReport report;
  report.min_lapse_squared = std::numeric_limits<double>::infinity();
  for (double p : p_grid) {
    if (!(p > 0.0)) throw std::invalid_argument("2D residual grid must exclude threshold");
    const PhaseJets j = phase_jets(model, p);
    if (v.singular_at(j.phi.v, j.theta.v, kCosFloor)) {
      report.excluded_p.push_back(p);
      continue;
    }
    // phi'' - kappa phi' + M dV/dphi = 0 and the theta equation, solved for
    // (kappa, M) by Cramer's rule on jets so that M' is available.
    const auto [gphi, gtheta] = v.gradient(j.phi, j.theta);
    const Jet a11 = -j.phi.derivative(), a21 = -j.theta.derivative();
    const Jet b1 = -j.phi.derivative().derivative(), b2 = -j.theta.derivative().derivative();
    const Jet det = a11 * gtheta - gphi * a21;
    if (std::abs(det.v) < 1e-300) {
      report.excluded_p.push_back(p);
      continue;
    }
    const Jet kappa = (b1 * gtheta - gphi * b2) / det;
    const Jet m = (a11 * b2 - a21 * b1) / det;
    OverdeterminationSample s;
    s.p = p;
    s.kappa = kappa.v;
    s.lapse_squared = m.v;
    s.deviation = p * std::abs(m.d1 / (2.0 * m.v) - kappa.v) / (1.0 + p * std::abs(kappa.v));
    report.max_deviation = std::max(report.max_deviation, s.deviation);
    report.min_lapse_squared = std::min(report.min_lapse_squared, m.v);
    report.samples.push_back(s);
  }
  return report;
}

double first_integral(const GeometricPotential& potential, const AffineState& s) {
  return 0.5 * (s.dphi * s.dphi + s.dtheta * s.dtheta) + potential.value(s.phi, s.theta);
}

AffineCurve integrate_affine(const GeometricPotential& potential, const AffineState& init, double tau_end,
                             const AffineOptions& options) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 4>;

  if (potential.singular_at(init.phi, init.theta, options.singular_tol)) {
    throw std::invalid_argument("initial point sits on a potential singularity");
  }
  if (!std::isfinite(tau_end)) throw std::invalid_argument("tau_end must be finite");
  if (options.output_points < 2) throw std::invalid_argument("need at least two output points");

  auto rhs = [&potential](const State& x, State& dx, double) {
    const auto [gphi, gtheta] = potential.gradient(x[0], x[1]);
    dx = {x[2], x[3], -gphi, -gtheta};
  };

  AffineCurve curve;
  State x{init.phi, init.theta, init.dphi, init.dtheta};
  curve.samples.push_back({0.0, init});
  if (tau_end == 0.0) return curve;

  auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<State>());
  const double direction = tau_end > 0.0 ? 1.0 : -1.0;
  stepper.initialize(x, 0.0, direction * std::min(1e-3, std::abs(tau_end)));

  const std::size_t n = options.output_points;
  std::size_t next = 1;
  auto output_time = [&](std::size_t i) { return tau_end * static_cast<double>(i) / static_cast<double>(n - 1); };
  std::size_t steps = 0;
  while (next < n) {
    stepper.do_step(rhs);
    if (++steps > 50'000'000) {
      curve.truncated = true;
      curve.diagnostic = "step budget exhausted at tau = " + std::to_string(stepper.current_time());
      break;
    }
    const double t_now = stepper.current_time();
    while (next < n && direction * (output_time(next) - t_now) <= 0.0) {
      State y;
      stepper.calc_state(output_time(next), y);
      curve.samples.push_back({output_time(next), {y[0], y[1], y[2], y[3]}});
      ++next;
    }
    const State& cur = stepper.current_state();
    if (potential.singular_at(cur[0], cur[1], options.singular_tol) ||
        !std::all_of(cur.begin(), cur.end(), [](double v) { return std::isfinite(v); })) {
      curve.truncated = true;
      curve.diagnostic = "potential singularity reached at tau = " + std::to_string(t_now) + "; curve truncated";
      break;
    }
  }
  return curve;
}

AffineState affine_initial_state(const TwoChannelModel& model, const LapseSpec& spec, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("initial momentum must be non-negative");
  const PhasePair x = phase_shifts(model, p).unwrapped;
  const PhasePair dx = phase_tangent(model, p);
  double n;
  if (p == 0.0) {
    if (model.dimension() != 3 || x.phi != 0.0 || x.theta != 0.0) {
      throw std::invalid_argument("threshold start needs a 3D model with finite scattering lengths");
    }
    n = spec.prefactor * spec.c1 * spec.angle_scale * (dx.phi - spec.epsilon * dx.theta);
  } else {
    n = spec.value(x.phi, x.theta, p);
  }
  if (std::abs(n) < kLapseFloor) throw std::invalid_argument("lapse vanishes at the initial point");
  return {x.phi, x.theta, dx.phi / n, dx.theta / n};
}

double affine_parameter_span(const TwoChannelModel& model, const LapseSpec& spec, double p0, double p1) {
  if (!(p0 >= 0.0) || !(p1 >= p0)) throw std::invalid_argument("need 0 <= p0 <= p1");
  auto integrand = [&](double p) {
    if (p <= 0.0) {
      const PhasePair dx = phase_tangent(model, 0.0);
      return spec.prefactor * spec.c1 * spec.angle_scale * (dx.phi - spec.epsilon * dx.theta);
    }
    if (!std::isfinite(p)) return 0.0;
    return lapse(model, spec, p);
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(integrand, p0, p1, 15, 1e-13);
}

double hausdorff_distance(const std::vector<PhasePair>& a, const std::vector<PhasePair>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Hausdorff distance of an empty curve");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

Trajectory galilean_rescale(const Trajectory& trajectory, double omega) {
  if (!(omega >= 1.0) || !std::isfinite(omega)) throw std::invalid_argument("Galilean factor must satisfy Omega >= 1");
  Trajectory out = trajectory;
  for (TrajectorySample& s : out.samples) {
    s.p *= omega;
    s.tangent.phi /= omega;
    s.tangent.theta /= omega;
  }
  return out;
}

TwoChannelModel galilean_relabeled_model(const TwoChannelModel& model, double omega) {
  if (!(omega >= 1.0) || !std::isfinite(omega)) throw std::invalid_argument("Galilean factor must satisfy Omega >= 1");
  TwoChannelModel out = model;
  if (auto* ch = std::get_if<Channels3D>(&out.channels)) {
    for (Channel3D* c : {&ch->singlet, &ch->triplet}) {
      c->a /= omega;
      c->r /= omega;
    }
  } else {
    auto& two = std::get<Channels2D>(out.channels);
    for (Channel2D* c : {&two.singlet, &two.triplet}) {
      c->a2 /= omega;
      c->sigma2 /= omega * omega;
    }
  }
  return out;
}

}  // namespace torus_scatter
