#include "torus_scatter/spin_algebra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace torus_scatter {

namespace {

constexpr double kUnitarityTol = 1e-10;

Spinor normalized(const Spinor& s) {
  const double n = s.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("product state factor must be a non-zero finite spinor");
  }
  return s / n;
}

double max_abs(const Operator4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

ProductState::ProductState(const Spinor& spin_a, const Spinor& spin_b)
    : spin_a_(normalized(spin_a)), spin_b_(normalized(spin_b)) {}

ProductState ProductState::up_down() {
  return ProductState(Spinor(1.0, 0.0), Spinor(0.0, 1.0));
}

State4 ProductState::joint() const {
  State4 psi;
  psi << spin_a_(0) * spin_b_(0), spin_a_(0) * spin_b_(1), spin_a_(1) * spin_b_(0),
      spin_a_(1) * spin_b_(1);
  return psi;
}

ProductState haar_product_state(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&] {
    Spinor s;
    // Real and imaginary parts are drawn in a fixed order so results are
    // reproducible for a seed.
    const double r0 = gauss(rng), i0 = gauss(rng), r1 = gauss(rng), i1 = gauss(rng);
    s << Complex(r0, i0), Complex(r1, i1);
    return s;
  };
  const Spinor a = draw();
  const Spinor b = draw();
  return ProductState(a, b);
}

DensityDiagnostics diagnose_density(const Operator4& rho) {
  DensityDiagnostics d;
  d.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  d.hermiticity_error = max_abs(rho - rho.adjoint());
  const Operator4 herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator4> solver(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  d.purity_error = max_abs(rho * rho - rho);
  return d;
}

DensityMatrix4::DensityMatrix4(const Operator4& rho, double tol) : rho_(rho) {
  const DensityDiagnostics d = diagnose_density(rho);
  if (d.trace_error > tol || d.hermiticity_error > tol || d.min_eigenvalue < -tol) {
    throw std::invalid_argument("not a density matrix: trace error " + std::to_string(d.trace_error) +
                                ", hermiticity error " + std::to_string(d.hermiticity_error) +
                                ", min eigenvalue " + std::to_string(d.min_eigenvalue));
  }
}

Operator4 identity4() { return Operator4::Identity(); }

Operator4 build_swap() {
  Eigen::Matrix<Complex, 2, 2> sx, sy, sz;
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  sz << 1.0, 0.0, 0.0, -1.0;
  auto kron = [](const Eigen::Matrix<Complex, 2, 2>& a, const Eigen::Matrix<Complex, 2, 2>& b) {
    Operator4 k;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
  };
  const Operator4 sigma_dot_sigma = kron(sx, sx) + kron(sy, sy) + kron(sz, sz);
  return 0.5 * (identity4() + sigma_dot_sigma);
}

Operator4 build_s_operator(double phi, double theta) {
  const Complex e_theta = std::polar(1.0, theta);
  const Complex e_phi = std::polar(1.0, phi);
  return 0.5 * (e_theta + e_phi) * identity4() + 0.5 * (e_theta - e_phi) * build_swap();
}

double unitarity_defect(const Operator4& u) { return max_abs(u * u.adjoint() - identity4()); }

DensityMatrix4 out_density_matrix(const Operator4& s, const ProductState& in,
                                  Conjugation conjugation) {
  const double defect = unitarity_defect(s);
  if (defect > kUnitarityTol) {
    throw std::invalid_argument("S operator is not unitary (max |SS^dagger - 1| = " +
                                std::to_string(defect) + ")");
  }
  const Operator4 evolve = conjugation == Conjugation::Complex ? Operator4(s.conjugate()) : s;
  const State4 out = evolve * in.joint();
  return DensityMatrix4(out * out.adjoint());
}

Operator4 spin_projector(SpinSector sector) {
  State4 singlet;
  singlet << 0.0, 1.0, -1.0, 0.0;
  singlet /= std::sqrt(2.0);
  const Operator4 ps = singlet * singlet.adjoint();
  return sector == SpinSector::Singlet ? ps : Operator4(identity4() - ps);
}

Operator4 project_total_spin(const Operator4& rho, SpinSector sector) {
  const Operator4 p = spin_projector(sector);
  return p * rho * p;
}

double entanglement_power_closed(double phi, double theta) {
  const double s = std::sin(theta - phi);
  return s * s / 6.0;
}

double reduced_linear_entropy(const State4& psi) {
  // psi_{ij} with i the first spin; rho_A = M M^dagger.
  Eigen::Matrix<Complex, 2, 2> m;
  m << psi(0), psi(1), psi(2), psi(3);
  const Eigen::Matrix<Complex, 2, 2> rho_a = m * m.adjoint();
  const double purity = (rho_a * rho_a).trace().real();
  return 1.0 - purity;
}

MonteCarloEstimate entanglement_power_mc(double phi, double theta, std::size_t n_samples,
                                         std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("entanglement_power_mc needs n_samples >= 1");
  const Operator4 s = build_s_operator(phi, theta);
  std::mt19937_64 rng(seed);
  // Welford accumulation keeps the variance stable for 1e5+ samples.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const ProductState in = haar_product_state(rng);
    const double e = kEntanglementPowerConvention * reduced_linear_entropy(s * in.joint());
    const double delta = e - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (e - mean);
  }
  MonteCarloEstimate est;
  est.mean = mean;
  est.samples = n_samples;
  est.standard_error =
      n_samples > 1 ? std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples))
                    : 0.0;
  return est;
}

}  // namespace torus_scatter
