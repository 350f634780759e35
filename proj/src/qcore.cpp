#include "fishcoh/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace fishcoh {

ComplexVector PreferredBasis::ket(int n) const {
  if (n < 0 || n >= dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "basis index " + std::to_string(n) + " outside dimension " +
                    std::to_string(dim));
  }
  ComplexVector v = ComplexVector::Zero(dim);
  v(n) = 1.0;
  return v;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::NonSquare,
                "density matrix must be square and non-empty, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double asym = max_abs_diff(m, m.adjoint());
  if (asym > tol::kExact) {
    std::ostringstream os;
    os << "Hermiticity violated: max|rho - rho^dagger| = " << asym;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  const double trace = m.trace().real();
  if (std::abs(trace - 1.0) > tol::kExact ||
      std::abs(m.trace().imag()) > tol::kExact) {
    std::ostringstream os;
    os << "unit trace violated: tr(rho) = " << trace;
    throw Error(ErrorCode::NotTraceOne, os.str());
  }
  ComplexMatrix h = hermitian_part(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h,
                                                      Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -tol::kAlgorithmic) {
    std::ostringstream os;
    os << "positive semidefiniteness violated: smallest eigenvalue "
       << smallest;
    throw Error(ErrorCode::NotPositive, os.str());
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (psi.size() == 0 || norm == 0.0) {
    throw Error(ErrorCode::NotPositive, "zero state vector");
  }
  const ComplexVector unit = psi / norm;
  return from_matrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> q) {
  double total = 0.0;
  for (double v : q) total += v;
  if (q.empty() || total <= 0.0) {
    throw Error(ErrorCode::NotTraceOne, "diagonal weights must have positive sum");
  }
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(q.size()),
                                        static_cast<Eigen::Index>(q.size()));
  for (std::size_t i = 0; i < q.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = q[i] / total;
  }
  return from_matrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return from_matrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

EigenSystem eig_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::NonSquare, "eig_hermitian needs a square matrix");
  }
  const double asym = max_abs_diff(a, a.adjoint());
  if (asym > tol::kExact) {
    std::ostringstream os;
    os << "max|A - A^dagger| = " << asym;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  const Eigen::Index n = a.rows();
  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen sorts ascending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

bool is_incoherent(const DensityMatrix& rho, double tolerance) {
  const int d = rho.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j && std::abs(rho(i, j)) > tolerance) return false;
    }
  }
  return true;
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

DensityMatrix dephased(const DensityMatrix& rho) {
  ComplexMatrix m = rho.matrix().diagonal().asDiagonal();
  return DensityMatrix::from_matrix(m);
}

namespace {

void require_sampler_dim(int dim) {
  if (dim < 2) {
    throw Error(ErrorCode::WrongDimension,
                "random states need dim >= 2, got " + std::to_string(dim));
  }
}

}  // namespace

DensityMatrix random_pure_state(int dim, std::uint64_t seed) {
  require_sampler_dim(dim);
  Rng rng(seed);
  ComplexVector psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = rng.complex_normal();
  return DensityMatrix::from_pure(psi);
}

DensityMatrix random_mixed_state(int dim, std::uint64_t seed) {
  require_sampler_dim(dim);
  Rng rng(seed);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::from_matrix(hermitian_part(m));
}

ComplexMatrix random_orthonormal_frame(int rows, int cols, Rng& rng) {
  if (rows < cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "orthonormal frame needs rows >= cols");
  }
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix orthonormalize(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace fishcoh
