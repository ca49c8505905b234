#include "oracles.hpp"

#include "torus_scatter/causality_poles.hpp"

#include <doctest.h>

#include <random>

using namespace torus_scatter;
using oracle::pi;
using cplx = std::complex<double>;

TEST_CASE("Wigner bounds") {
  CHECK(wigner_derivative_bound(1.0, 0.0, 0.0) == 0.0);
  CHECK(wigner_derivative_bound(1.0, pi / 4, 0.0) == doctest::Approx(0.5));
  CHECK(wigner_derivative_bound(2.0, 0.1, 0.5) == doctest::Approx(-0.5 + std::sin(0.2 + 2.0) / 4.0));
  CHECK_THROWS_AS(wigner_derivative_bound(0.0, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(wigner_derivative_bound(1.0, 0.1, -1.0), std::invalid_argument);

  CHECK(threshold_range_bound_3d(0.0, 3.0) == 0.0);
  CHECK(threshold_range_bound_3d(0.0, -0.2) == 0.0);
  CHECK(threshold_range_bound_3d(2.5, 2.5) == doctest::Approx(2.0 * 2.5 / 3.0));
  CHECK(threshold_range_bound_3d(1.0, -1.0) == doctest::Approx(14.0 / 3.0));
  CHECK_THROWS_AS(threshold_range_bound_3d(1.0, 0.0), std::invalid_argument);

  // The p -> 0 limit of the derivative bound, with delta ~ -a p, reproduces
  // the threshold range bound through r/2 = d(p cot delta)/d(p^2).
  const double a = 1.7, R = 0.6;
  const double r_bound = threshold_range_bound_3d(R, a);
  CHECK(r_bound == doctest::Approx(2.0 * (R - R * R / a + R * R * R / (3.0 * a * a))));
}

TEST_CASE("2D effective-area bound") {
  CHECK(effective_area_bound_2d(0.0, 1.0) == 0.0);
  const double g = std::numbers::egamma;
  CHECK(effective_area_bound_2d(2.0, 1.0) == doctest::Approx(4.0 / pi * ((g - 0.5) * (g - 0.5) + 0.25)));
  double previous = effective_area_bound_2d(1e-3, 1.0);
  for (double R = 1e-4; R >= 1e-6; R /= 10.0) {
    const double b = effective_area_bound_2d(R, 1.0);
    const double l = std::log(R / 2.0) + g - 0.5, l10 = std::log(10.0 * R / 2.0) + g - 0.5;
    CHECK(b >= R * R / (4.0 * pi));
    CHECK(previous / b == doctest::Approx(100.0 * (l10 * l10 + 0.25) / (l * l + 0.25)).epsilon(1e-12));
    CHECK(b < previous);
    previous = b;
  }
  CHECK(effective_area_bound_2d(1e-150, 1.0) < 1e-290);
  CHECK_THROWS_AS(effective_area_bound_2d(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("tangent-vector audit") {
  const std::vector<double> grid = momentum_grid(1e-3, 1e3, 2000);
  const TangentAudit sla = tangent_vector_audit(sample_trajectory(TwoChannelModel::three_d({1.0, 0.0}, {-5.0, 0.0}), grid));
  CHECK(sla.violations.empty());

  for (double lambda : {0.1, 0.25, 0.5, 3.0}) {
    const TwoChannelModel m = make_symmetric_model(SymmetryTable::T3, 6, -1.0, -2.0, lambda);
    CHECK(tangent_vector_audit(sample_trajectory(m, grid)).violations.empty());
  }

  const TwoChannelModel acausal = make_symmetric_model(SymmetryTable::T2, 6, 1.0, 2.0, 0.5);
  const TangentAudit bad = tangent_vector_audit(sample_trajectory(acausal, grid));
  CHECK(bad.violations.size() >= 1);
  CHECK(bad.worst_scaled_margin < -1e-3);
  for (const TangentViolation& v : bad.violations) CHECK(v.margin < 0.0);

  CHECK_THROWS_AS(tangent_vector_audit(sample_trajectory(TwoChannelModel::two_d({1, 0}, {2, 0}), grid)),
                  std::invalid_argument);
  CHECK(to_string(PhaseChannel::Theta) == "theta");
}

TEST_CASE("positive effective range violates the derivative bound at R = 0") {
  // d delta/dp >= sin(2 delta)/(2p) is the R = 0 Wigner bound; the audit is
  // that inequality for phi = 2 delta.
  const Channel3D c{1.0, 1.0};
  const TwoChannelModel m = TwoChannelModel::three_d(c, c);
  bool violated = false;
  for (double p : momentum_grid(1e-2, 1e2, 200)) {
    const double d = 0.5 * phase_shifts(m, p).unwrapped.phi;
    const double dd = 0.5 * phase_tangent(m, p).phi;
    violated = violated || dd < wigner_derivative_bound(p, d, 0.0) - 1e-12;
  }
  CHECK(violated);
}

TEST_CASE("quadrant exits") {
  const std::vector<double> grid = momentum_grid(1e-3, 1e4, 4000);
  const QuadrantExitAudit sla = quadrant_exit_audit(sample_trajectory(TwoChannelModel::three_d({1.0, 0.0}, {5.0, 0.0}), grid));
  CHECK(sla.crossings.empty());

  const QuadrantExitAudit causal =
      quadrant_exit_audit(sample_trajectory(make_symmetric_model(SymmetryTable::T3, 6, -1.0, -2.0, 0.5), grid));
  CHECK(causal.forbidden == 0);
  CHECK(causal.crossings.size() >= 2);
  for (const QuadrantCrossing& c : causal.crossings) {
    CHECK(c.allowed);
    CHECK((c.edge == Edge::Right || c.edge == Edge::Upper));
  }

  const QuadrantExitAudit acausal =
      quadrant_exit_audit(sample_trajectory(make_symmetric_model(SymmetryTable::T2, 6, 1.0, 2.0, 0.5), grid));
  CHECK(acausal.forbidden >= 1);

  CHECK_THROWS_AS(quadrant_exit_audit(sample_trajectory(TwoChannelModel::three_d({1.0, 0.0}, {5.0, 0.0}), {0.01, 100.0})),
                  std::invalid_argument);
  CHECK(to_string(Edge::Lower) == "lower");
}

TEST_CASE("closed-form poles") {
  const PoleSet dbl = poles_closed_form(-1.0, 0.25);
  REQUIRE(dbl.poles.size() == 1);
  CHECK(dbl.kind == PoleCase::DoubleVirtual);
  CHECK(dbl.poles[0].multiplicity == 2);
  CHECK(dbl.poles[0].p == cplx(0.0, -2.0));

  const PoleSet res = poles_closed_form(-1.0, 0.5);
  CHECK(res.kind == PoleCase::ResonancePair);
  CHECK(pole_set_distance(res, PoleSet{{{cplx(1.0, -1.0), 1}, {cplx(-1.0, -1.0), 1}}, PoleCase::ResonancePair}) < 1e-15);

  const PoleSet two = poles_closed_form(2.0, 0.125);
  CHECK(two.kind == PoleCase::TwoVirtual);
  const double root = std::sqrt(0.5);
  CHECK(pole_set_distance(two, PoleSet{{{cplx(0, -2.0 * (1 + root)), 1}, {cplx(0, -2.0 * (1 - root)), 1}}, PoleCase::TwoVirtual}) <
        1e-14);

  CHECK_THROWS_AS(poles_closed_form(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(poles_closed_form(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(poles_closed_form(0.0, 1.0), std::invalid_argument);
  CHECK(to_string(PoleCase::TwoVirtual) == "two_virtual");
}

TEST_CASE("numeric poles agree with the closed form and the textbook roots") {
  for (double lambda : {0.125, 0.25, 0.5, 1.0, 10.0}) {
    for (double mag : {0.1, 1.0, 10.0}) {
      const double a = -mag, r = 2.0 * a * lambda;
      CAPTURE(lambda);
      CAPTURE(mag);
      const PoleSet num = poles_numeric(a, r);
      const PoleSet closed = poles_closed_form(a, lambda);
      CHECK(num.kind == closed.kind);
      CHECK(pole_set_distance(num, closed) < 1e-12 * std::max(1.0, 1.0 / mag));
      CHECK(verify_lower_half(num).pass);

      const std::vector<cplx> text = oracle::poles_textbook(a, r);
      const PoleSet oracle_set = classify_poles(text);
      CHECK(pole_set_distance(num, oracle_set) < 1e-12 * std::max(1.0, 1.0 / mag));
    }
  }
}

TEST_CASE("pole collision at lambda = 1/4 is continuous") {
  for (double a : {-0.1, -1.0, -10.0}) {
    const PoleSet at = poles_numeric(a, 0.5 * a);
    REQUIRE(at.kind == PoleCase::DoubleVirtual);
    CHECK(at.poles[0].p.imag() == doctest::Approx(-1.0 / (0.5 * std::abs(a))));
    for (double dl : {-1e-6, 1e-6}) {
      const PoleSet near = poles_numeric(a, 2.0 * a * (0.25 + dl));
      CHECK(near.kind == (dl < 0 ? PoleCase::TwoVirtual : PoleCase::ResonancePair));
      // Square-root branch point: displacement ~ sqrt(4 |dl|) relative.
      CHECK(pole_set_distance(near, at) / std::abs(at.poles[0].p) < 5e-3);
    }
  }
}

TEST_CASE("pole classification edge cases") {
  const PoleSet single = poles_numeric(2.0, 0.0);
  CHECK(single.kind == PoleCase::OutOfScope);
  REQUIRE(single.poles.size() == 1);
  CHECK(single.poles[0].p == cplx(0.0, 0.5));

  const PoleSet acausal = poles_numeric(1.0, 1.0);
  CHECK_FALSE(verify_lower_half(acausal).pass);
  CHECK(verify_lower_half(acausal).max_deviation > 0.0);

  PoleSet injected = poles_closed_form(-1.0, 2.0);
  injected.poles[0].p = std::conj(injected.poles[0].p);
  CHECK_FALSE(verify_lower_half(injected).pass);
  CHECK_FALSE(verify_lower_half(PoleSet{}).pass);

  CHECK(pole_set_distance(single, poles_closed_form(-1.0, 0.25)) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(poles_numeric(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("random causal lambda models keep their poles in the lower half plane") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> la(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double a = -std::exp(la(rng)), lambda = std::exp(la(rng));
    CHECK(verify_lower_half(poles_numeric(a, 2.0 * a * lambda)).pass);
  }
}
