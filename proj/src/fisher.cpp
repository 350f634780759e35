#include "fishcoh/fisher.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace fishcoh {

namespace {

constexpr double kZeroProbability = 1e-14;
constexpr double kZeroDerivative = 1e-10;
constexpr double kSupportCutoff = 1e-12;
constexpr double kKernelLeak = 1e-8;
constexpr int kMaxVertexDim = 20;

}  // namespace

void check_fisher_datum(const FisherDatum& fd) {
  if (fd.p.size() != fd.d.size()) {
    throw Error(ErrorCode::InvalidDatum, "p and d lengths differ");
  }
  double sum_p = 0.0;
  double sum_d = 0.0;
  for (std::size_t x = 0; x < fd.p.size(); ++x) {
    if (fd.p[x] < -tol::kExact) {
      std::ostringstream os;
      os << "negative probability p[" << x << "] = " << fd.p[x];
      throw Error(ErrorCode::InvalidDatum, os.str());
    }
    sum_p += fd.p[x];
    sum_d += fd.d[x];
  }
  if (std::abs(sum_p - 1.0) > tol::kAlgorithmic) {
    std::ostringstream os;
    os << "probabilities sum to " << sum_p;
    throw Error(ErrorCode::InvalidDatum, os.str());
  }
  if (std::abs(sum_d) > tol::kAlgorithmic) {
    std::ostringstream os;
    os << "derivatives sum to " << sum_d;
    throw Error(ErrorCode::InvalidDatum, os.str());
  }
}

double classical_fi(const FisherDatum& fd) {
  check_fisher_datum(fd);
  double fi = 0.0;
  for (std::size_t x = 0; x < fd.p.size(); ++x) {
    if (fd.p[x] <= kZeroProbability) {
      if (std::abs(fd.d[x]) <= kZeroDerivative) continue;
      std::ostringstream os;
      os << "outcome " << x << " has p = " << fd.p[x] << " but dp = " << fd.d[x];
      throw Error(ErrorCode::SingularOutcome, os.str());
    }
    fi += fd.d[x] * fd.d[x] / fd.p[x];
  }
  return fi;
}

StateDerivativePair StateDerivativePair::make(DensityMatrix rho,
                                              ComplexMatrix drho) {
  if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "derivative shape differs from state");
  }
  const double asym = max_abs_diff(drho, drho.adjoint());
  if (asym > tol::kExact) {
    std::ostringstream os;
    os << "derivative not Hermitian (" << asym << ")";
    throw Error(ErrorCode::InvalidDatum, os.str());
  }
  if (std::abs(drho.trace()) > tol::kExact) {
    std::ostringstream os;
    os << "derivative not traceless (" << std::abs(drho.trace()) << ")";
    throw Error(ErrorCode::InvalidDatum, os.str());
  }
  return StateDerivativePair{std::move(rho), hermitian_part(drho)};
}

StateDerivativePair state_derivative(const ParametrizedIO& io,
                                     const DensityMatrix& rho) {
  if (rho.dim() != io.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state and operation dimensions differ");
  }
  try {
    require_valid(io);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidIO, e.what());
  }
  const int out = io.out_dim();
  ComplexMatrix drho = ComplexMatrix::Zero(out, out);
  for (std::size_t x = 0; x < io.size(); ++x) {
    const ComplexMatrix e = io.kraus()[x].matrix(0.0, out);
    const ComplexMatrix de = io.kraus()[x].derivative(0.0, out);
    const ComplexMatrix half = de * rho.matrix() * e.adjoint();
    drho += half + half.adjoint();
  }
  return StateDerivativePair::make(apply_io(io, rho, io.theta0()), drho);
}

double qfi_sld(const StateDerivativePair& sd) {
  const EigenSystem es = eig_hermitian(sd.rho.matrix());
  const ComplexMatrix dm = es.vectors.adjoint() * sd.drho * es.vectors;
  const Eigen::Index n = dm.rows();
  double qfi = 0.0;
  double leak = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom = es.values(i) + es.values(j);
      const double mag2 = std::norm(dm(i, j));
      if (denom > kSupportCutoff) {
        qfi += mag2 / denom;
      } else {
        leak += mag2;
      }
    }
  }
  leak = std::sqrt(leak);
  if (leak > kKernelLeak) {
    std::ostringstream os;
    os << "derivative has kernel-block norm " << leak;
    throw Error(ErrorCode::SingularFamily, os.str());
  }
  return 2.0 * qfi;
}

FisherDatum measurement_datum(const StateDerivativePair& sd,
                              const ComplexMatrix& basis) {
  if (basis.rows() != sd.rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "measurement basis dimension");
  }
  FisherDatum fd;
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    const ComplexVector v = basis.col(k);
    fd.p.push_back((v.adjoint() * sd.rho.matrix() * v)(0).real());
    fd.d.push_back((v.adjoint() * sd.drho * v)(0).real());
  }
  return fd;
}

FisherDatum projective_readout_datum(const ParametrizedIO& io,
                                     const DensityMatrix& rho) {
  const StateDerivativePair sd = state_derivative(io, rho);
  const int out = io.out_dim();
  return measurement_datum(sd, ComplexMatrix::Identity(out, out));
}

DiagonalGenerator DiagonalGenerator::make(RealVector h) {
  for (Eigen::Index n = 0; n < h.size(); ++n) {
    if (!(h(n) >= 0.0 && h(n) <= 1.0)) {
      std::ostringstream os;
      os << "generator eigenvalue h[" << n << "] = " << h(n) << " outside [0, 1]";
      throw Error(ErrorCode::InvalidDatum, os.str());
    }
  }
  return DiagonalGenerator{std::move(h)};
}

StateDerivativePair unitary_family(const DensityMatrix& rho,
                                   const DiagonalGenerator& gen, double theta0) {
  (void)theta0;  // the reference phase cancels in rho_theta0 and drho
  if (gen.h.size() != rho.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "generator and state dimensions differ");
  }
  const int d = rho.dim();
  ComplexMatrix drho(d, d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      drho(n, m) = Complex(0.0, gen.h(n) - gen.h(m)) * rho(n, m);
    }
  }
  return StateDerivativePair::make(rho, drho);
}

double qubit_coherence_analytic(const DensityMatrix& rho, double theta0) {
  if (rho.dim() != 2) {
    throw Error(ErrorCode::WrongDimension,
                "qubit closed form needs dim 2, got " + std::to_string(rho.dim()));
  }
  RealVector h(2);
  h << 1.0, 0.0;
  return qfi_sld(unitary_family(rho, DiagonalGenerator::make(h), theta0));
}

double qubit_closed_form(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error(ErrorCode::WrongDimension, "qubit closed form needs dim 2");
  }
  return 4.0 * std::norm(rho(0, 1));
}

UnitaryOptimum max_unitary_qfi_pure(const DensityMatrix& phi) {
  const int d = phi.dim();
  if (std::abs(purity(phi) - 1.0) > tol::kAlgorithmic) {
    throw Error(ErrorCode::NotPure, "state purity differs from 1");
  }
  if (d > kMaxVertexDim) {
    throw Error(ErrorCode::DimensionTooLarge,
                "vertex enumeration limited to d <= 20, got " + std::to_string(d));
  }
  const RealVector q = phi.matrix().diagonal().real();
  UnitaryOptimum best{-1.0, DiagonalGenerator{RealVector::Zero(d)}};
  const std::uint64_t vertices = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < vertices; ++mask) {
    RealVector h(d);
    for (int n = 0; n < d; ++n) h(n) = (mask >> n) & 1U ? 1.0 : 0.0;
    const double mean = h.dot(q);
    const double second = h.cwiseProduct(h).dot(q);
    const double value = 4.0 * (second - mean * mean);
    if (value > best.value) best = UnitaryOptimum{value, DiagonalGenerator{h}};
  }
  return best;
}

}  // namespace fishcoh
