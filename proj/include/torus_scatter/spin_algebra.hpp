#pragma once

// Linear algebra on the two-spin Hilbert space C^2 (x) C^2.
//
// Basis order is |uu>, |ud>, |du>, |dd>; the singlet is (|ud> - |du>)/sqrt(2).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>

namespace torus_scatter {

using Complex = std::complex<double>;
using Operator4 = Eigen::Matrix<Complex, 4, 4>;
using State4 = Eigen::Matrix<Complex, 4, 1>;
using Spinor = Eigen::Matrix<Complex, 2, 1>;

/// Product state |a> (x) |b> with each factor normalized.
class ProductState {
 public:
  /// Normalizes both factors; throws std::invalid_argument on a zero spinor.
  ProductState(const Spinor& spin_a, const Spinor& spin_b);

  static ProductState up_down();

  const Spinor& spin_a() const { return spin_a_; }
  const Spinor& spin_b() const { return spin_b_; }
  State4 joint() const;

 private:
  Spinor spin_a_;
  Spinor spin_b_;
};

/// Draws each factor uniformly on its Bloch sphere (normalized complex
/// Gaussian pairs).
ProductState haar_product_state(std::mt19937_64& rng);

/// Hermitian, unit-trace, positive 4x4 operator.
class DensityMatrix4 {
 public:
  /// Throws std::invalid_argument unless the matrix is a density matrix
  /// within `tol` (trace, Hermiticity, smallest eigenvalue >= -tol).
  explicit DensityMatrix4(const Operator4& rho, double tol = 1e-10);

  const Operator4& matrix() const { return rho_; }

 private:
  Operator4 rho_;
};

struct DensityDiagnostics {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double purity_error = 0.0;  // max |rho^2 - rho|
};

DensityDiagnostics diagnose_density(const Operator4& rho);

Operator4 identity4();

/// P12 = (1 + sigma.sigma) / 2.
Operator4 build_swap();

/// S = (e^{i theta} + e^{i phi})/2 * 1 + (e^{i theta} - e^{i phi})/2 * P12 with
/// phi = 2 delta_0 (singlet) and theta = 2 delta_1 (triplet).
Operator4 build_s_operator(double phi, double theta);

/// max |U U^dagger - 1| over entries.
double unitarity_defect(const Operator4& u);

enum class Conjugation { None, Complex };

/// rho = S |in><in| S^dagger, or rho-bar = S^* |in><in| S^T when conjugated.
/// Throws std::invalid_argument if S is not unitary to 1e-10.
DensityMatrix4 out_density_matrix(const Operator4& s, const ProductState& in,
                                  Conjugation conjugation = Conjugation::None);

enum class SpinSector { Singlet, Triplet };

Operator4 spin_projector(SpinSector sector);

/// P rho P for the chosen total-spin sector (not renormalized).
Operator4 project_total_spin(const Operator4& rho, SpinSector sector);

/// (1/6) sin^2(theta - phi).
double entanglement_power_closed(double phi, double theta);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Mean reduced linear entropy 1 - Tr(rho_A^2) of S|a>|b> over Haar product
/// states, scaled by kEntanglementPowerConvention. Deterministic for a seed.
MonteCarloEstimate entanglement_power_mc(double phi, double theta, std::size_t n_samples,
                                         std::uint64_t seed);

/// Ratio between the closed form and the plain Haar average of the linear
/// entropy. Fixed once by matching the closed form's maximum 1/6.
inline constexpr double kEntanglementPowerConvention = 1.0;

/// Linear entropy 1 - Tr(rho_A^2) of the first spin of a pure two-spin state.
double reduced_linear_entropy(const State4& psi);

}  // namespace torus_scatter
