#pragma once

// Third-order forward-mode derivative jets.
//
// A Jet carries f(p) together with f'(p), f''(p), f'''(p). Arithmetic and the
// elementary functions below propagate the derivatives exactly (up to
// rounding), which is what the trajectory-equation residuals need: second
// derivatives of the phases, first derivatives of the lapse, and one extra
// order for the 2D consistency check.

#include <cmath>

namespace torus_scatter {

struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static constexpr Jet constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static constexpr Jet variable(double x) { return {x, 1.0, 0.0, 0.0}; }

  /// Jet of f' given the jet of f; the third derivative of f' is unknown and
  /// left at zero.
  constexpr Jet derivative() const { return {d1, d2, d3, 0.0}; }
};

namespace detail {

// f(g) by Faa di Bruno, given f and its first three derivatives at g.v.
constexpr Jet compose(const Jet& g, double f0, double f1, double f2, double f3) {
  return {f0, f1 * g.d1, f2 * g.d1 * g.d1 + f1 * g.d2,
          f3 * g.d1 * g.d1 * g.d1 + 3.0 * f2 * g.d1 * g.d2 + f1 * g.d3};
}

}  // namespace detail

constexpr Jet operator+(const Jet& a, const Jet& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
constexpr Jet operator-(const Jet& a, const Jet& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
constexpr Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
constexpr Jet operator+(const Jet& a, double c) { return {a.v + c, a.d1, a.d2, a.d3}; }
constexpr Jet operator+(double c, const Jet& a) { return a + c; }
constexpr Jet operator-(const Jet& a, double c) { return {a.v - c, a.d1, a.d2, a.d3}; }
constexpr Jet operator-(double c, const Jet& a) { return {c - a.v, -a.d1, -a.d2, -a.d3}; }
constexpr Jet operator*(const Jet& a, double c) { return {a.v * c, a.d1 * c, a.d2 * c, a.d3 * c}; }
constexpr Jet operator*(double c, const Jet& a) { return a * c; }
constexpr Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }

constexpr Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
          a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}

constexpr Jet reciprocal(const Jet& a) {
  const double r = 1.0 / a.v;
  return detail::compose(a, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

constexpr Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
constexpr Jet operator/(double c, const Jet& b) { return c * reciprocal(b); }

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return detail::compose(a, s, c, -s, -c);
}

inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return detail::compose(a, c, -s, -c, s);
}

inline Jet tan(const Jet& a) {
  const double t = std::tan(a.v);
  const double sec2 = 1.0 + t * t;
  return detail::compose(a, t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t));
}

inline Jet atan(const Jet& a) {
  const double x = a.v;
  const double q = 1.0 / (1.0 + x * x);
  return detail::compose(a, std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
}

inline Jet log(const Jet& a) {
  const double r = 1.0 / a.v;
  return detail::compose(a, std::log(a.v), r, -r * r, 2.0 * r * r * r);
}

// d atan2(y, x) = (x dy - y dx) / (x^2 + y^2); smooth wherever (x, y) != 0,
// including across x = 0.
inline Jet atan2(const Jet& y, const Jet& x) {
  const Jet rate = (x * y.derivative() - y * x.derivative()) / (x * x + y * y);
  return {std::atan2(y.v, x.v), rate.v, rate.d1, rate.d2};
}

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double atan(double x) { return std::atan(x); }
inline double log(double x) { return std::log(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.v; }

}  // namespace torus_scatter
