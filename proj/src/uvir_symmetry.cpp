#include "torus_scatter/uvir_symmetry.hpp"

#include "torus_scatter/torus_trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace torus_scatter {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr AngleMap from_phi(int sign, double offset = 0.0) { return {false, sign, offset}; }
constexpr AngleMap from_theta(int sign, double offset = 0.0) { return {true, sign, offset}; }

double max_abs(const Operator4& m) { return m.cwiseAbs().maxCoeff(); }

std::string describe(const AngleMap& m, const char* target) {
  std::string s = std::string(target) + " -> ";
  if (m.offset != 0.0) s += (m.offset > 0 ? "pi" : "-pi");
  if (m.sign < 0) {
    s += "-";
  } else if (m.offset != 0.0) {
    s += "+";
  }
  s += m.from_theta ? "theta" : "phi";
  return s;
}

const TwoChannelModel& require_map_source(const TwoChannelModel& model) {
  if (model.dimension() == 3 && !model.family) {
    throw std::invalid_argument("symmetry verification needs a model with a family tag (table, row, lambda)");
  }
  return model;
}

Operator4 s_operator_at(const TwoChannelModel& model, double p) {
  const PhaseEvaluation ev = phase_shifts(model, p);
  return build_s_operator(ev.unwrapped.phi, ev.unwrapped.theta);
}

}  // namespace

double inverted_momentum(double p, double lambda, double a0, double a1) {
  if (!(p > 0.0)) throw std::invalid_argument("threshold maps to infinity: inversion needs p > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("inversion needs lambda > 0");
  if (a0 * a1 == 0.0 || !std::isfinite(a0 * a1)) {
    throw std::invalid_argument("inversion needs finite non-zero scattering lengths");
  }
  return 1.0 / (lambda * std::abs(a0 * a1) * p);
}

double inverted_momentum_2d(double p, double a2_0, double a2_1) {
  if (!(p > 0.0)) throw std::invalid_argument("threshold maps to infinity: inversion needs p > 0");
  if (!(a2_0 > 0.0) || !(a2_1 > 0.0)) throw std::invalid_argument("2D scattering lengths must be positive");
  return 1.0 / (a2_0 * a2_1 * p);
}

double inverted_momentum(const TwoChannelModel& model, double p) {
  if (model.dimension() == 2) {
    const Channels2D& ch = model.two();
    return inverted_momentum_2d(p, ch.singlet.a2, ch.triplet.a2);
  }
  require_map_source(model);
  const Channels3D& ch = model.three();
  return inverted_momentum(p, model.family->inversion_lambda(), ch.singlet.a, ch.triplet.a);
}

std::string to_string(RhoClass c) {
  switch (c) {
    case RhoClass::Rho: return "rho";
    case RhoClass::RhoBar: return "rhobar";
    case RhoClass::SingletRhoTripletRhoBar: return "rho_minus+rhobar_plus";
    case RhoClass::TripletRhoSingletRhoBar: return "rho_plus+rhobar_minus";
  }
  return "?";
}

SymmetryMap expected_map(SymmetryTable table, int row) {
  if (row < 1 || row > row_count(table)) {
    throw std::invalid_argument("table " + to_string(table) + " has no row " + std::to_string(row));
  }
  if (table == SymmetryTable::T1) {
    switch (row) {
      case 1: return {from_theta(+1, -kPi), from_phi(+1, +kPi), RhoClass::RhoBar};
      case 2: return {from_theta(+1, +kPi), from_phi(+1, -kPi), RhoClass::RhoBar};
      case 3: return {from_theta(-1, +kPi), from_phi(-1, +kPi), RhoClass::Rho};
      default: return {from_theta(-1, -kPi), from_phi(-1, -kPi), RhoClass::Rho};
    }
  }
  switch (row) {
    case 1: return {from_phi(+1), from_theta(+1), RhoClass::Rho};
    case 2: return {from_phi(+1), from_theta(-1), RhoClass::SingletRhoTripletRhoBar};
    case 3: return {from_phi(-1), from_theta(+1), RhoClass::TripletRhoSingletRhoBar};
    case 4: return {from_phi(-1), from_theta(-1), RhoClass::RhoBar};
    case 5: return {from_theta(+1), from_phi(+1), RhoClass::RhoBar};
    default: return {from_theta(-1), from_phi(-1), RhoClass::Rho};
  }
}

SymmetryMap expected_map_2d() { return {from_theta(-1), from_phi(-1), RhoClass::Rho}; }

SymmetryMap expected_map(const TwoChannelModel& model) {
  if (model.dimension() == 2) return expected_map_2d();
  require_map_source(model);
  return expected_map(model.family->table, model.family->row);
}

std::optional<RhoClass> rho_class_from_phase_difference(const SymmetryMap& map) {
  // theta' - phi' = (offset_t - offset_p) + c_theta * theta + c_phi * phi.
  auto coeff = [](const AngleMap& m, bool theta) { return m.from_theta == theta ? m.sign : 0; };
  const int c_theta = coeff(map.theta_map, true) - coeff(map.phi_map, true);
  const int c_phi = coeff(map.theta_map, false) - coeff(map.phi_map, false);
  const double offset = map.theta_map.offset - map.phi_map.offset;
  if (std::abs(angle_difference(offset, 0.0)) > 1e-12) return std::nullopt;
  if (c_theta == 1 && c_phi == -1) return RhoClass::Rho;
  if (c_theta == -1 && c_phi == 1) return RhoClass::RhoBar;
  return std::nullopt;
}

PhaseMapReport verify_phase_map(const TwoChannelModel& model, const std::vector<double>& p_grid,
                                double tol) {
  const SymmetryMap map = expected_map(model);
  PhaseMapReport report;
  report.relation = describe(map.phi_map, "phi") + ", " + describe(map.theta_map, "theta");
  report.row = model.family ? model.family->row : 0;

  double worst = 0.0;
  for (double p : p_grid) {
    const double q = inverted_momentum(model, p);
    const PhasePair here = phase_shifts(model, p).unwrapped;
    const PhasePair there = phase_shifts(model, q).unwrapped;
    const PhasePair expected = map.apply(here);
    const double dev = std::max(std::abs(angle_difference(there.phi, expected.phi)),
                                std::abs(angle_difference(there.theta, expected.theta)));
    if (!(dev <= worst)) {
      worst = dev;
      report.worst_p = p;
    }
  }
  report.check = make_check("phase_map", worst, tol);
  return report;
}

DensityMapReport verify_density_map(const TwoChannelModel& model,
                                    const std::vector<ProductState>& in_states,
                                    const std::vector<double>& p_grid, double tol) {
  const SymmetryMap map = expected_map(model);
  const Operator4 ps = spin_projector(SpinSector::Singlet);
  const Operator4 pt = spin_projector(SpinSector::Triplet);

  DensityMapReport report;
  report.rho_class = map.rho_class;
  double worst = 0.0;
  for (double p : p_grid) {
    const Operator4 s_here = s_operator_at(model, p);
    const Operator4 s_there = s_operator_at(model, inverted_momentum(model, p));
    for (const ProductState& in : in_states) {
      const Operator4 rho_there = out_density_matrix(s_there, in).matrix();
      const Operator4 rho = out_density_matrix(s_here, in).matrix();
      const Operator4 rho_bar = out_density_matrix(s_here, in, Conjugation::Complex).matrix();
      double dev = 0.0;
      switch (map.rho_class) {
        case RhoClass::Rho: dev = max_abs(rho_there - rho); break;
        case RhoClass::RhoBar: dev = max_abs(rho_there - rho_bar); break;
        case RhoClass::SingletRhoTripletRhoBar:
          dev = std::max(max_abs(ps * (rho_there - rho) * ps), max_abs(pt * (rho_there - rho_bar) * pt));
          break;
        case RhoClass::TripletRhoSingletRhoBar:
          dev = std::max(max_abs(pt * (rho_there - rho) * pt), max_abs(ps * (rho_there - rho_bar) * ps));
          break;
      }
      worst = std::max(worst, dev);
      if (map.rho_class == RhoClass::SingletRhoTripletRhoBar ||
          map.rho_class == RhoClass::TripletRhoSingletRhoBar) {
        report.cross_block_vs_rho = std::max(report.cross_block_vs_rho, max_abs(ps * (rho_there - rho) * pt));
        report.cross_block_vs_rhobar =
            std::max(report.cross_block_vs_rhobar, max_abs(ps * (rho_there - rho_bar) * pt));
      }
    }
  }
  report.check = make_check("density_map", worst, tol);
  return report;
}

CheckResult verify_ep_invariance(const TwoChannelModel& model, const std::vector<double>& p_grid,
                                 double tol) {
  double worst = 0.0;
  for (double p : p_grid) {
    const PhasePair here = phase_shifts(model, p).unwrapped;
    const PhasePair there = phase_shifts(model, inverted_momentum(model, p)).unwrapped;
    worst = std::max(worst, std::abs(entanglement_power_closed(there.phi, there.theta) -
                                     entanglement_power_closed(here.phi, here.theta)));
  }
  return make_check("ep_invariance", worst, tol);
}

}  // namespace torus_scatter
