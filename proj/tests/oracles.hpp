#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;

inline constexpr double pi = std::numbers::pi;

inline Vec4 singlet() {
  Vec4 s = Vec4::Zero();
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  return s;
}

/// S from its spectral decomposition: e^{i phi} on the singlet, e^{i theta}
/// on the triplet.
inline Mat4 s_spectral(double phi, double theta) {
  const Vec4 s = singlet();
  const Mat4 ps = s * s.adjoint();
  return std::polar(1.0, phi) * ps + std::polar(1.0, theta) * (Mat4::Identity() - ps);
}

/// SWAP as a permutation matrix of the basis |uu>, |ud>, |du>, |dd>.
inline Mat4 swap_permutation() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(3, 3) = 1.0;
  m(1, 2) = m(2, 1) = 1.0;
  return m;
}

/// (1 + sigma.sigma)/2 from explicit Kronecker products of Pauli matrices.
inline Mat4 swap_from_pauli() {
  using Mat2 = Eigen::Matrix<cplx, 2, 2>;
  Mat2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  sz << 1, 0, 0, -1;
  auto kron = [](const Mat2& a, const Mat2& b) {
    Mat4 k;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
  };
  return 0.5 * (Mat4::Identity() + kron(sx, sx) + kron(sy, sy) + kron(sz, sz));
}

/// Phase shift from p cot(delta) = -1/a + r p^2/2, reduced to (-pi/2, pi/2].
inline double delta_mod_pi_3d(double a, double r, double p) {
  const double pcot = -1.0 / a + 0.5 * r * p * p;
  return std::atan2(p, pcot) - (std::atan2(p, pcot) > pi / 2 ? pi : 0.0);
}

/// Distance between two angles on the circle of circumference `period`.
inline double circle_distance(double x, double y, double period = 2.0 * pi) {
  const double d = std::fmod(std::abs(x - y), period);
  return std::min(d, period - d);
}

/// Richardson-extrapolated central difference.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

/// Poles of S for (a, r): (1/r)(i +- sqrt(2r/a - 1)).
inline std::vector<cplx> poles_textbook(double a, double r) {
  const cplx root = std::sqrt(cplx(2.0 * r / a - 1.0, 0.0));
  return {(cplx(0, 1) + root) / r, (cplx(0, 1) - root) / r};
}

/// Closed-form N^2 for the 2D potential: (2 c1/(pi p))^2 (cos phi - cos theta)^2.
inline double lapse_squared_2d(double phi, double theta, double p, double c1) {
  const double f = 2.0 * c1 / (pi * p) * (std::cos(phi) - std::cos(theta));
  return f * f;
}

/// Partial trace purity of a pure two-spin state by explicit index sums.
inline double linear_entropy(const Vec4& psi) {
  cplx rho[2][2] = {{0, 0}, {0, 0}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) rho[i][j] += psi(2 * i + k) * std::conj(psi(2 * j + k));
  double purity = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) purity += std::norm(rho[i][j]);
  return 1.0 - purity;
}

}  // namespace oracle
