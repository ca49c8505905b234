#pragma once

// Momentum-inversion (UV/IR) symmetry: the inversion p -> 1/(lambda |a0 a1| p)
// (3D) or p -> 1/(a0 a1 p) (2D), the tabulated action on (phi, theta) and on
// the out-state density matrix, and numerical verification of both.

#include "torus_scatter/check.hpp"
#include "torus_scatter/ere_models.hpp"
#include "torus_scatter/spin_algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torus_scatter {

/// 1/(lambda |a0 a1| p). Involutive. Throws std::invalid_argument for p <= 0
/// ("threshold maps to infinity"), lambda <= 0 or a0 a1 = 0.
double inverted_momentum(double p, double lambda, double a0, double a1);

/// 2D form 1/(a0 a1 p) with the 2D scattering lengths.
double inverted_momentum_2d(double p, double a2_0, double a2_1);

/// Inversion appropriate to the model: its family lambda (T1 uses 1) in 3D,
/// the 2D map in 2D. Throws if a 3D model has no family tag.
double inverted_momentum(const TwoChannelModel& model, double p);

/// phi' = offset + sign * (phi or theta), theta' likewise.
struct AngleMap {
  bool from_theta = false;
  int sign = 1;
  double offset = 0.0;

  double apply(double phi, double theta) const {
    return offset + sign * (from_theta ? theta : phi);
  }
};

/// How the density matrix transforms: rho, rho-bar, or block-wise mixtures
/// (rho_- + rhobar_+ keeps the singlet block of rho and the triplet block of
/// rho-bar; rho_+ + rhobar_- the other way round).
enum class RhoClass { Rho, RhoBar, SingletRhoTripletRhoBar, TripletRhoSingletRhoBar };

std::string to_string(RhoClass c);

struct SymmetryMap {
  AngleMap phi_map;
  AngleMap theta_map;
  RhoClass rho_class = RhoClass::Rho;

  PhasePair apply(const PhasePair& x) const {
    return {phi_map.apply(x.phi, x.theta), theta_map.apply(x.phi, x.theta)};
  }
};

/// The map of a family row. T3 rows carry the same maps as T2.
SymmetryMap expected_map(SymmetryTable table, int row);

/// (phi, theta) -> (-theta, -phi), rho -> rho.
SymmetryMap expected_map_2d();

/// The model's map: from its family tag in 3D, the 2D map in 2D.
SymmetryMap expected_map(const TwoChannelModel& model);

/// Rho if the map preserves theta - phi mod 2 pi, RhoBar if it negates it,
/// nullopt otherwise (the block-mixed rows).
std::optional<RhoClass> rho_class_from_phase_difference(const SymmetryMap& map);

struct PhaseMapReport {
  CheckResult check;
  std::string relation;
  int row = 0;
  double worst_p = 0.0;
};

/// For each p: phases at inverted_momentum(p) against the mapped phases at p,
/// compared mod 2 pi. Throws if a 3D model has no family tag.
PhaseMapReport verify_phase_map(const TwoChannelModel& model, const std::vector<double>& p_grid,
                                double tol);

struct DensityMapReport {
  CheckResult check;
  RhoClass rho_class = RhoClass::Rho;
  /// For mixed classes: largest singlet-triplet block difference between
  /// rho(p') and rho(p), and between rho(p') and rhobar(p). Recorded only.
  double cross_block_vs_rho = 0.0;
  double cross_block_vs_rhobar = 0.0;
};

DensityMapReport verify_density_map(const TwoChannelModel& model,
                                    const std::vector<ProductState>& in_states,
                                    const std::vector<double>& p_grid, double tol);

/// max |E(p') - E(p)| with E the closed-form entanglement power.
CheckResult verify_ep_invariance(const TwoChannelModel& model, const std::vector<double>& p_grid,
                                 double tol);

}  // namespace torus_scatter
