#include "torus_scatter/ere_models.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace torus_scatter {

namespace {

constexpr double kPi = std::numbers::pi;

void require_momentum(double p) {
  if (!(p >= 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("momentum must be finite and non-negative, got " + std::to_string(p));
  }
}

double tangent_3d(const Channel3D& c, double p) {
  if (c.unitarity) {
    const double h = 0.5 * c.r;
    return -2.0 * h / (1.0 + h * h * p * p);
  }
  const double half_arp2 = 0.5 * c.a * c.r * p * p;
  const double d = 1.0 - half_arp2;
  return -2.0 * c.a * (1.0 + half_arp2) / (d * d + c.a * c.a * p * p);
}

double tangent_2d(const Channel2D& c, double p) {
  const double x = std::log(c.a2 * c.a2 * p * p) / kPi + c.sigma2 * p * p;
  const double dx = 2.0 / (kPi * p) + 2.0 * c.sigma2 * p;
  return -2.0 * dx / (1.0 + x * x);
}

// Sign requirement of a T1 / T3 row on one scattering length.
enum class Sign { Positive, Negative };

bool satisfies(double a, Sign s) { return s == Sign::Positive ? a > 0.0 : a < 0.0; }

std::string condition_text(const char* name, Sign s) {
  return std::string("(") + name + (s == Sign::Positive ? ">0)" : "<0)");
}

// T3 entry: r = coeff * a_source * lambda, valid when a_source has `sign`.
struct CausalRangeRule {
  double coeff;
  int source;  // 0 -> a0, 1 -> a1
  Sign sign;
};

struct CausalRow {
  CausalRangeRule r0;
  CausalRangeRule r1;
};

constexpr std::array<CausalRow, 6> kTable3{{
    {{-2.0, 1, Sign::Positive}, {-2.0, 0, Sign::Positive}},
    {{+2.0, 1, Sign::Negative}, {-2.0, 0, Sign::Positive}},
    {{-2.0, 1, Sign::Positive}, {+2.0, 0, Sign::Negative}},
    {{+2.0, 1, Sign::Negative}, {+2.0, 0, Sign::Negative}},
    {{-2.0, 0, Sign::Positive}, {-2.0, 1, Sign::Positive}},
    {{+2.0, 0, Sign::Negative}, {+2.0, 1, Sign::Negative}},
}};

constexpr std::array<std::array<Sign, 2>, 4> kTable1Signs{{
    {Sign::Positive, Sign::Negative},
    {Sign::Negative, Sign::Positive},
    {Sign::Negative, Sign::Negative},
    {Sign::Positive, Sign::Positive},
}};

void check_row(SymmetryTable table, int row) {
  if (row < 1 || row > row_count(table)) {
    throw std::invalid_argument("table " + to_string(table) + " has no row " + std::to_string(row));
  }
}

}  // namespace

std::string to_string(SymmetryTable table) {
  switch (table) {
    case SymmetryTable::T1: return "T1";
    case SymmetryTable::T2: return "T2";
    case SymmetryTable::T3: return "T3";
  }
  return "?";
}

SymmetryTable symmetry_table_from_string(const std::string& name) {
  if (name == "T1") return SymmetryTable::T1;
  if (name == "T2") return SymmetryTable::T2;
  if (name == "T3") return SymmetryTable::T3;
  throw std::invalid_argument("unknown symmetry table '" + name + "' (expected T1, T2 or T3)");
}

int row_count(SymmetryTable table) { return table == SymmetryTable::T1 ? 4 : 6; }

const Channels3D& TwoChannelModel::three() const {
  if (const auto* c = std::get_if<Channels3D>(&channels)) return *c;
  throw std::invalid_argument("operation requires a three-dimensional model");
}

const Channels2D& TwoChannelModel::two() const {
  if (const auto* c = std::get_if<Channels2D>(&channels)) return *c;
  throw std::invalid_argument("operation requires a two-dimensional model");
}

bool at_scattering_length_pole(const Channel3D& c, double p) {
  if (c.unitarity) return false;
  const double half_arp2 = 0.5 * c.a * c.r * p * p;
  return half_arp2 > 0.0 && std::abs(1.0 - half_arp2) <= 1e-12;
}

double momentum_dependent_scattering_length(const Channel3D& c, double p) {
  if (c.unitarity) {
    const double inv = -0.5 * c.r * p * p;
    return inv == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv;
  }
  const double d = 1.0 - 0.5 * c.a * c.r * p * p;
  if (d == 0.0) return std::copysign(std::numeric_limits<double>::infinity(), c.a);
  return c.a / d;
}

PhaseEvaluation phase_shifts_3d(const TwoChannelModel& model, double p) {
  require_momentum(p);
  const Channels3D& ch = model.three();
  PhaseEvaluation out;
  out.unwrapped.phi = 2.0 * phase_shift_3d(ch.singlet, p);
  out.unwrapped.theta = 2.0 * phase_shift_3d(ch.triplet, p);
  out.singular_phi = at_scattering_length_pole(ch.singlet, p);
  out.singular_theta = at_scattering_length_pole(ch.triplet, p);
  return out;
}

PhaseEvaluation phase_shifts_2d(const TwoChannelModel& model, double p) {
  require_momentum(p);
  const Channels2D& ch = model.two();
  for (const Channel2D* c : {&ch.singlet, &ch.triplet}) {
    if (!(c->a2 > 0.0)) throw std::invalid_argument("2D scattering length must be positive");
  }
  PhaseEvaluation out;
  if (p == 0.0) {
    out.unwrapped = {2.0 * kPi, 2.0 * kPi};
    out.threshold = true;
    return out;
  }
  out.unwrapped.phi = 2.0 * phase_shift_2d(ch.singlet, p);
  out.unwrapped.theta = 2.0 * phase_shift_2d(ch.triplet, p);
  return out;
}

PhaseEvaluation phase_shifts(const TwoChannelModel& model, double p) {
  return model.dimension() == 3 ? phase_shifts_3d(model, p) : phase_shifts_2d(model, p);
}

PhaseJets phase_jets(const TwoChannelModel& model, double p) {
  const Jet q = Jet::variable(p);
  if (model.dimension() == 3) {
    const Channels3D& ch = model.three();
    return {2.0 * phase_shift_3d(ch.singlet, q), 2.0 * phase_shift_3d(ch.triplet, q)};
  }
  if (!(p > 0.0)) throw std::invalid_argument("2D phase derivatives need p > 0");
  const Channels2D& ch = model.two();
  return {2.0 * phase_shift_2d(ch.singlet, q), 2.0 * phase_shift_2d(ch.triplet, q)};
}

PhasePair phase_tangent(const TwoChannelModel& model, double p) {
  require_momentum(p);
  if (model.dimension() == 3) {
    const Channels3D& ch = model.three();
    return {tangent_3d(ch.singlet, p), tangent_3d(ch.triplet, p)};
  }
  if (p == 0.0) throw std::invalid_argument("2D tangent is singular at threshold p = 0");
  const Channels2D& ch = model.two();
  return {tangent_2d(ch.singlet, p), tangent_2d(ch.triplet, p)};
}

std::complex<double> s_element(const TwoChannelModel& model, SpinChannel channel, double p) {
  require_momentum(p);
  if (model.dimension() == 2) {
    const PhaseEvaluation ev = phase_shifts_2d(model, p);
    return std::polar(1.0, channel == SpinChannel::Singlet ? ev.unwrapped.phi : ev.unwrapped.theta);
  }
  const Channel3D& c = channel == SpinChannel::Singlet ? model.three().singlet : model.three().triplet;
  // (1 - i a p / D) / (1 + i a p / D) = (D - i a p) / (D + i a p): finite
  // through the a_s(p) pole, and |S| = 1 exactly up to rounding.
  std::complex<double> num, den;
  if (c.unitarity) {
    // Divide through by a and take 1/a -> 0.
    num = {-0.5 * c.r * p * p, -p};
    den = {-0.5 * c.r * p * p, p};
    if (p == 0.0) return {-1.0, 0.0};
  } else {
    const double d = 1.0 - 0.5 * c.a * c.r * p * p;
    num = {d, -c.a * p};
    den = {d, c.a * p};
  }
  return num / den;
}

std::pair<double, double> table2_ranges(int row, double a0, double a1, double lambda) {
  check_row(SymmetryTable::T2, row);
  const double eta = lambda * std::abs(a0 * a1);
  switch (row) {
    case 1: return {-2.0 * eta / a0, -2.0 * eta / a1};
    case 2: return {-2.0 * eta / a0, +2.0 * eta / a1};
    case 3: return {+2.0 * eta / a0, -2.0 * eta / a1};
    case 4: return {+2.0 * eta / a0, +2.0 * eta / a1};
    case 5: return {-2.0 * eta / a1, -2.0 * eta / a0};
    default: return {+2.0 * eta / a1, +2.0 * eta / a0};
  }
}

TwoChannelModel make_symmetric_model(SymmetryTable table, int row, double a0, double a1,
                                     double lambda) {
  check_row(table, row);
  if (a0 == 0.0 || a1 == 0.0 || !std::isfinite(a0) || !std::isfinite(a1)) {
    throw std::invalid_argument("symmetric models need finite non-zero scattering lengths");
  }
  if (table != SymmetryTable::T1 && !(lambda > 0.0)) {
    throw std::invalid_argument("lambda must be positive");
  }

  double r0 = 0.0, r1 = 0.0;
  switch (table) {
    case SymmetryTable::T1: {
      const auto& signs = kTable1Signs[static_cast<std::size_t>(row - 1)];
      if (!satisfies(a0, signs[0])) {
        throw std::invalid_argument("T1 row " + std::to_string(row) + " requires " +
                                    condition_text("a0", signs[0]));
      }
      if (!satisfies(a1, signs[1])) {
        throw std::invalid_argument("T1 row " + std::to_string(row) + " requires " +
                                    condition_text("a1", signs[1]));
      }
      lambda = 1.0;
      break;
    }
    case SymmetryTable::T2:
      std::tie(r0, r1) = table2_ranges(row, a0, a1, lambda);
      break;
    case SymmetryTable::T3: {
      const CausalRow& rule = kTable3[static_cast<std::size_t>(row - 1)];
      const std::array<double, 2> a{a0, a1};
      auto apply = [&](const CausalRangeRule& rr) {
        const double src = a[static_cast<std::size_t>(rr.source)];
        if (!satisfies(src, rr.sign)) {
          throw std::invalid_argument("T3 row " + std::to_string(row) + " requires " +
                                      condition_text(rr.source == 0 ? "a0" : "a1", rr.sign));
        }
        return rr.coeff * src * lambda;
      };
      r0 = apply(rule.r0);
      r1 = apply(rule.r1);
      break;
    }
  }

  TwoChannelModel m = TwoChannelModel::three_d({a0, r0, false}, {a1, r1, false});
  m.family = Family{table, row, lambda};
  return m;
}

}  // namespace torus_scatter
