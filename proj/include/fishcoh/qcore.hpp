#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "fishcoh/error.hpp"
#include "fishcoh/rng.hpp"

namespace fishcoh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
/// Identities that hold in exact arithmetic.
inline constexpr double kExact = 1e-12;
/// Eigensolver and other algorithmic residuals.
inline constexpr double kAlgorithmic = 1e-10;
/// User-facing classification (coherent or not, pure or not).
inline constexpr double kClassify = 1e-9;
}  // namespace tol

/// The fixed computational basis {|n>} relative to which coherence is
/// measured. Documentation counts n from 1; code and files count from 0.
struct PreferredBasis {
  int dim = 0;

  ComplexVector ket(int n) const;
};

/// A d x d Hermitian, unit-trace, positive-semidefinite matrix.
///
/// Construction goes through from_matrix(), which checks every invariant and
/// throws Error naming the first one violated (NotHermitian, NotTraceOne,
/// NotPositive). Instances are immutable.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const ComplexMatrix& m);
  /// |psi><psi| / <psi|psi>.
  static DensityMatrix from_pure(const ComplexVector& psi);
  /// diag(q) / sum(q).
  static DensityMatrix diagonal(std::span<const double> q);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& matrix() const { return mat_; }
  Complex operator()(int row, int col) const { return mat_(row, col); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
  ComplexMatrix mat_;
};

/// Eigen-decomposition of a Hermitian matrix: values descending, vectors as
/// orthonormal columns in the same order.
struct EigenSystem {
  RealVector values;
  ComplexMatrix vectors;
};

/// Throws NonSquare, or NotHermitian when max|a - a^dagger| > 1e-12.
EigenSystem eig_hermitian(const ComplexMatrix& a);

/// True iff every off-diagonal entry has modulus <= tolerance.
bool is_incoherent(const DensityMatrix& rho, double tolerance);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// (a + a^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& a);

double purity(const DensityMatrix& rho);

/// Copy of rho with every off-diagonal entry set to zero.
DensityMatrix dephased(const DensityMatrix& rho);

/// |psi><psi| with psi a normalized complex standard normal vector.
DensityMatrix random_pure_state(int dim, std::uint64_t seed);

/// G G^dagger / tr(G G^dagger) with G having i.i.d. complex normal entries.
DensityMatrix random_mixed_state(int dim, std::uint64_t seed);

/// Haar-random rows x cols matrix with orthonormal columns (rows >= cols):
/// thin QR of a complex Gaussian matrix with R's diagonal phases removed.
ComplexMatrix random_orthonormal_frame(int rows, int cols, Rng& rng);

/// Nearest matrix with orthonormal columns (polar factor W V^dagger of the
/// SVD W S V^dagger).
ComplexMatrix orthonormalize(const ComplexMatrix& a);

}  // namespace fishcoh
