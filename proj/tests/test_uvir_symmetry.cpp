#include "oracles.hpp"

#include "torus_scatter/torus_trajectory.hpp"
#include "torus_scatter/uvir_symmetry.hpp"

#include <doctest.h>

#include <random>

using namespace torus_scatter;
using oracle::pi;

namespace {

std::vector<ProductState> states(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<ProductState> out;
  for (int i = 0; i < n; ++i) out.push_back(haar_product_state(rng));
  return out;
}

// Sign pattern (a0, a1) allowed by each row; T2 rows accept any signs.
std::pair<double, double> signs_for(SymmetryTable table, int row) {
  if (table == SymmetryTable::T1) {
    switch (row) {
      case 1: return {1, -1};
      case 2: return {-1, 1};
      case 3: return {-1, -1};
      default: return {1, 1};
    }
  }
  if (table == SymmetryTable::T3) {
    switch (row) {
      case 1: case 5: return {1, 1};
      case 2: return {1, -1};
      case 3: return {-1, 1};
      default: return {-1, -1};
    }
  }
  return {row % 2 == 0 ? 1.0 : -1.0, row > 3 ? 1.0 : -1.0};
}

}  // namespace

TEST_CASE("momentum inversion") {
  CHECK(inverted_momentum(2.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(inverted_momentum(1.0, 1.0, 1.0, 5.0) == doctest::Approx(0.2));
  const double fixed = 1.0 / std::sqrt(0.3 * 6.0);
  CHECK(inverted_momentum(fixed, 0.3, -2.0, 3.0) == doctest::Approx(fixed));
  CHECK(inverted_momentum(inverted_momentum(0.37, 0.3, -2.0, 3.0), 0.3, -2.0, 3.0) == doctest::Approx(0.37));
  CHECK(inverted_momentum_2d(0.5, 2.0, 3.0) == doctest::Approx(1.0 / 3.0));
  try {
    inverted_momentum(0.0, 1.0, 1.0, 1.0);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("threshold maps to infinity") != std::string::npos);
  }
  CHECK_THROWS_AS(inverted_momentum(1.0, 0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(inverted_momentum(1.0, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(inverted_momentum(TwoChannelModel::three_d({1, 0}, {2, 0}), 1.0), std::invalid_argument);
}

TEST_CASE("tabulated maps") {
  const SymmetryMap t1r4 = expected_map(SymmetryTable::T1, 4);
  const PhasePair x = t1r4.apply({0.3, 0.5});
  CHECK(x.phi == doctest::Approx(-pi - 0.5));
  CHECK(x.theta == doctest::Approx(-pi - 0.3));
  CHECK(t1r4.rho_class == RhoClass::Rho);

  const SymmetryMap t2r5 = expected_map(SymmetryTable::T2, 5);
  CHECK(t2r5.apply({0.3, 0.5}).phi == 0.5);
  CHECK(t2r5.apply({0.3, 0.5}).theta == 0.3);
  CHECK(t2r5.rho_class == RhoClass::RhoBar);

  const SymmetryMap two = expected_map_2d();
  CHECK(two.apply({0.3, 0.5}).phi == -0.5);
  CHECK(two.apply({0.3, 0.5}).theta == -0.3);
  CHECK(two.rho_class == RhoClass::Rho);

  CHECK(expected_map(SymmetryTable::T2, 2).rho_class == RhoClass::SingletRhoTripletRhoBar);
  CHECK(expected_map(SymmetryTable::T3, 3).rho_class == RhoClass::TripletRhoSingletRhoBar);
  CHECK_THROWS_AS(expected_map(SymmetryTable::T1, 5), std::invalid_argument);
  CHECK_THROWS_AS(expected_map(SymmetryTable::T3, 0), std::invalid_argument);
}

TEST_CASE("every map is an involution mod 2 pi") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (SymmetryTable table : {SymmetryTable::T1, SymmetryTable::T2, SymmetryTable::T3}) {
    for (int row = 1; row <= row_count(table); ++row) {
      const SymmetryMap m = expected_map(table, row);
      for (int i = 0; i < 20; ++i) {
        const PhasePair x{u(rng), u(rng)};
        const PhasePair y = m.apply(m.apply(x));
        CHECK(oracle::circle_distance(x.phi, y.phi) < 1e-12);
        CHECK(oracle::circle_distance(x.theta, y.theta) < 1e-12);
      }
    }
  }
}

TEST_CASE("scattering-length reflection symmetry at a0 = 1, a1 = 5") {
  const TwoChannelModel m = make_symmetric_model(SymmetryTable::T1, 4, 1.0, 5.0, 1.0);
  // phi(1/5) = -2 atan(1/5) and -pi - theta(1) = -pi + 2 atan(5).
  const double lhs = phase_shifts(m, inverted_momentum(m, 1.0)).unwrapped.phi;
  CHECK(lhs == doctest::Approx(-2.0 * std::atan(0.2)));
  CHECK(oracle::circle_distance(lhs, -pi + 2.0 * std::atan(5.0)) < 1e-15);

  const std::vector<double> grid = inversion_paired_grid(5.0, 6.0, 301);
  const PhaseMapReport r = verify_phase_map(m, grid, 1e-10);
  CHECK(r.check.pass);
  CHECK(r.check.max_deviation < 1e-10);
  CHECK(r.row == 4);

  ProductState ud = ProductState::up_down();
  const DensityMapReport d = verify_density_map(m, {ud}, grid, 1e-10);
  CHECK(d.check.pass);
  const CheckResult ep = verify_ep_invariance(m, grid, 1e-12);
  CHECK(ep.pass);
}

TEST_CASE("T2 row 5 with a0/a1 = 15: phi and theta swap under inversion") {
  for (double sign : {-1.0, 1.0}) {
    const TwoChannelModel m = make_symmetric_model(SymmetryTable::T2, 5, 15.0 * sign, 1.0 * sign, 0.01);
    const std::vector<double> grid = momentum_grid(1e-3, 1e3, 2001);
    const PhaseMapReport r = verify_phase_map(m, grid, 1e-10);
    CHECK(r.check.pass);
    const DensityMapReport d = verify_density_map(m, states(7, 5), grid, 1e-10);
    CHECK(d.rho_class == RhoClass::RhoBar);
    CHECK(d.check.pass);
    CHECK(verify_ep_invariance(m, grid, 1e-10).pass);
  }
}

TEST_CASE("2D inversion maps phi to -theta") {
  const TwoChannelModel m = TwoChannelModel::two_d({2.0, 0.0}, {3.0, 0.0});
  const double p = 0.7;
  const double q = inverted_momentum(m, p);
  CHECK(q == doctest::Approx(1.0 / (6.0 * p)));
  CHECK(oracle::circle_distance(phase_shifts(m, q).unwrapped.phi, -phase_shifts(m, p).unwrapped.theta) < 1e-14);
  const std::vector<double> grid = inversion_paired_grid(6.0, 8.0, 201);
  CHECK(verify_phase_map(m, grid, 1e-10).check.pass);
  CHECK(verify_density_map(m, states(2, 5), grid, 1e-10).check.pass);
  CHECK(verify_ep_invariance(m, grid, 1e-12).pass);
}

TEST_CASE("all rows: phase map, density class and phase-difference classifier") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mag(0.2, 5.0), lam(0.02, 2.0);
  const std::vector<ProductState> in = states(23, 10);
  const std::vector<double> grid = momentum_grid(1e-2, 1e2, 151);
  for (SymmetryTable table : {SymmetryTable::T1, SymmetryTable::T2, SymmetryTable::T3}) {
    for (int row = 1; row <= row_count(table); ++row) {
      const auto [s0, s1] = signs_for(table, row);
      const TwoChannelModel m = make_symmetric_model(table, row, s0 * mag(rng), s1 * mag(rng), lam(rng));
      CAPTURE(to_string(table));
      CAPTURE(row);
      CHECK(verify_phase_map(m, grid, 1e-10).check.pass);
      const DensityMapReport d = verify_density_map(m, in, grid, 1e-10);
      CHECK(d.check.pass);

      const SymmetryMap map = expected_map(table, row);
      const std::optional<RhoClass> by_difference = rho_class_from_phase_difference(map);
      const bool mixed = map.rho_class == RhoClass::SingletRhoTripletRhoBar ||
                         map.rho_class == RhoClass::TripletRhoSingletRhoBar;
      if (mixed) {
        CHECK_FALSE(by_difference.has_value());
        CHECK(d.cross_block_vs_rho > 1e-3);
        CHECK(d.cross_block_vs_rhobar > 1e-3);
      } else {
        REQUIRE(by_difference.has_value());
        CHECK(*by_difference == map.rho_class);
        CHECK(verify_ep_invariance(m, grid, 1e-12).pass);
      }

      for (double p : grid) {
        const PhasePair here = phase_shifts(m, p).unwrapped;
        const PhasePair there = phase_shifts(m, inverted_momentum(m, p)).unwrapped;
        const double dh = here.phi - here.theta, dt = there.phi - there.theta;
        if (map.rho_class == RhoClass::Rho) CHECK(oracle::circle_distance(dt, dh) < 1e-10);
        if (map.rho_class == RhoClass::RhoBar) CHECK(oracle::circle_distance(dt, -dh) < 1e-10);
      }
    }
  }
}

TEST_CASE("zero phases make every density class coincide") {
  const Operator4 s = build_s_operator(0.0, 0.0);
  for (const ProductState& in : states(4, 3)) {
    const Operator4 rho = out_density_matrix(s, in).matrix();
    const Operator4 bar = out_density_matrix(s, in, Conjugation::Complex).matrix();
    CHECK((rho - bar).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("equal scattering lengths have vanishing entanglement power") {
  const TwoChannelModel m = make_symmetric_model(SymmetryTable::T1, 4, 2.0, 2.0, 1.0);
  for (double p : momentum_grid(1e-3, 1e3, 50)) {
    const PhasePair x = phase_shifts(m, p).unwrapped;
    CHECK(entanglement_power_closed(x.phi, x.theta) == 0.0);
  }
  CHECK(verify_ep_invariance(m, momentum_grid(1e-3, 1e3, 50), 1e-15).max_deviation == 0.0);
}

TEST_CASE("verification needs a family tag in 3D") {
  const TwoChannelModel m = TwoChannelModel::three_d({1.0, 0.0}, {5.0, 0.0});
  CHECK_THROWS_AS(verify_phase_map(m, {1.0}, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(verify_density_map(m, states(1, 1), {1.0}, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(verify_ep_invariance(m, {1.0}, 1e-10), std::invalid_argument);
}
