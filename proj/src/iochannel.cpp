#include "fishcoh/iochannel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fishcoh {

namespace {

constexpr double kGridTolerance = 1e-8;
constexpr int kGridPoints = 11;

double max_off_diagonal(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

// A^dagger A for the theta-independent part A = sum_n c_n |g(n)><n|.
ComplexMatrix gram(const IncoherentKraus& k) {
  const int d = k.dim();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    for (int l = 0; l < d; ++l) {
      if (k.g[n] == k.g[l]) m(n, l) = std::conj(k.c(n)) * k.c(l);
    }
  }
  return m;
}

bool same_rate(const RealVector& a, const RealVector& b) {
  return a.size() == b.size() && (a - b).cwiseAbs().maxCoeff() <= tol::kExact;
}

int label_space(std::span<const IncoherentKraus> kraus, int dim) {
  int out = dim;
  for (const auto& k : kraus) out = std::max(out, k.max_label() + 1);
  return out;
}

DensityMatrix normalized_state(const ComplexMatrix& m) {
  ComplexMatrix h = hermitian_part(m);
  // Completeness holds to 1e-10, the trace to the same order.
  h /= h.trace().real();
  return DensityMatrix::from_matrix(h);
}

void require_fixed_complete(std::span<const IncoherentKraus> kraus, int dim) {
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& k : kraus) {
    if (k.dim() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "Kraus input dimension differs from state");
    }
    sum += gram(k);
  }
  const double residual = max_abs_diff(sum, ComplexMatrix::Identity(dim, dim));
  if (residual > tol::kAlgorithmic) {
    std::ostringstream os;
    os << "max|sum K^dagger K - I| = " << residual;
    throw Error(ErrorCode::Incomplete, os.str());
  }
}

}  // namespace

IncoherentKraus IncoherentKraus::make(std::vector<int> g, ComplexVector c,
                                      RealVector r) {
  const auto d = static_cast<Eigen::Index>(g.size());
  if (d == 0 || c.size() != d || r.size() != d) {
    throw Error(ErrorCode::InvalidKraus, "g, c and r must have equal non-zero length");
  }
  for (int label : g) {
    if (label < 0) throw Error(ErrorCode::InvalidKraus, "output labels must be >= 0");
  }
  for (Eigen::Index n = 0; n < d; ++n) {
    if (!(r(n) >= 0.0 && r(n) <= 1.0)) {
      std::ostringstream os;
      os << "phase rate r[" << n << "] = " << r(n) << " outside [0, 1]";
      throw Error(ErrorCode::InvalidKraus, os.str());
    }
  }
  return IncoherentKraus{std::move(g), std::move(c), std::move(r)};
}

double IncoherentKraus::weight() const { return c.squaredNorm(); }

int IncoherentKraus::max_label() const {
  return g.empty() ? -1 : *std::max_element(g.begin(), g.end());
}

ComplexMatrix IncoherentKraus::matrix(double offset, int out_dim) const {
  ComplexMatrix m = ComplexMatrix::Zero(out_dim, dim());
  for (int n = 0; n < dim(); ++n) {
    m(g[n], n) += c(n) * std::polar(1.0, r(n) * offset);
  }
  return m;
}

ComplexMatrix IncoherentKraus::derivative(double offset, int out_dim) const {
  ComplexMatrix m = ComplexMatrix::Zero(out_dim, dim());
  for (int n = 0; n < dim(); ++n) {
    m(g[n], n) += Complex(0.0, r(n)) * c(n) * std::polar(1.0, r(n) * offset);
  }
  return m;
}

ParametrizedIO::ParametrizedIO(int dim, double theta0,
                               std::vector<IncoherentKraus> kraus)
    : dim_(dim), out_dim_(dim), theta0_(theta0) {
  if (dim <= 0) throw Error(ErrorCode::InvalidIO, "dimension must be positive");
  for (auto& k : kraus) {
    if (k.dim() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "Kraus operator acts on dimension " + std::to_string(k.dim()) +
                      ", operation on " + std::to_string(dim));
    }
    if (k.weight() < kNegligibleKrausWeight) continue;
    kraus_.push_back(std::move(k));
  }
  out_dim_ = label_space(kraus_, dim);
}

ComplexMatrix ParametrizedIO::kraus_matrix(std::size_t x, double theta) const {
  return kraus_.at(x).matrix(theta - theta0_, out_dim_);
}

ComplexMatrix ParametrizedIO::completeness_sum(double theta) const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (std::size_t x = 0; x < kraus_.size(); ++x) {
    const ComplexMatrix e = kraus_matrix(x, theta);
    sum += e.adjoint() * e;
  }
  return sum;
}

std::string_view to_string(ValidityCertificate cert) {
  switch (cert) {
    case ValidityCertificate::GroupDiagonal: return "group-diagonal";
    case ValidityCertificate::ThetaGrid: return "theta-grid";
    case ValidityCertificate::None: return "none";
  }
  return "none";
}

ValidityReport validate_io(const ParametrizedIO& io) {
  ValidityReport report;
  const int d = io.dim();
  const ComplexMatrix identity = ComplexMatrix::Identity(d, d);
  report.residual_theta0 = max_abs_diff(io.completeness_sum(io.theta0()), identity);

  const auto& kraus = io.kraus();
  for (std::size_t x = 0; x < kraus.size(); ++x) {
    auto it = std::find_if(report.groups.begin(), report.groups.end(),
                           [&](const RateGroup& grp) { return same_rate(grp.rate, kraus[x].r); });
    if (it == report.groups.end()) {
      report.groups.push_back(RateGroup{kraus[x].r, {}, {}, 0.0});
      it = std::prev(report.groups.end());
    }
    it->members.push_back(x);
  }

  bool all_diagonal = true;
  for (auto& grp : report.groups) {
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    ComplexMatrix running = ComplexMatrix::Zero(d, d);
    RateGroup::Block current;
    for (std::size_t x : grp.members) {
      const ComplexMatrix gx = gram(kraus[x]);
      total += gx;
      running += gx;
      current.members.push_back(x);
      if (max_off_diagonal(running) <= tol::kAlgorithmic) {
        current.diagonal = running.diagonal().real();
        grp.blocks.push_back(std::move(current));
        current = {};
        running.setZero();
      }
    }
    if (!current.members.empty()) {
      current.diagonal = running.diagonal().real();
      grp.blocks.push_back(std::move(current));
    }
    grp.off_diagonal = max_off_diagonal(total);
    if (grp.off_diagonal > tol::kAlgorithmic) all_diagonal = false;
  }

  if (report.residual_theta0 > tol::kAlgorithmic) {
    std::ostringstream os;
    os << "max|sum E^dagger E - I| = " << report.residual_theta0 << " at theta0";
    report.failure = ErrorCode::IncompleteAtTheta0;
    report.failing_theta = io.theta0();
    report.message = os.str();
    return report;
  }

  if (all_diagonal) {
    report.valid = true;
    report.certificate = ValidityCertificate::GroupDiagonal;
    return report;
  }

  for (int k = 0; k < kGridPoints; ++k) {
    const double theta = io.theta0() - std::numbers::pi +
                         2.0 * std::numbers::pi * k / (kGridPoints - 1);
    const double residual = max_abs_diff(io.completeness_sum(theta), identity);
    report.grid_thetas.push_back(theta);
    report.grid_max_residual = std::max(report.grid_max_residual, residual);
    if (residual > kGridTolerance && !report.failure) {
      std::ostringstream os;
      os << "max|sum E^dagger E - I| = " << residual << " at theta = " << theta;
      report.failure = ErrorCode::IncompleteAtTheta;
      report.failing_theta = theta;
      report.message = os.str();
    }
  }
  if (!report.failure) {
    report.valid = true;
    report.certificate = ValidityCertificate::ThetaGrid;
  }
  return report;
}

void require_valid(const ParametrizedIO& io) {
  const ValidityReport report = validate_io(io);
  if (!report.valid) throw Error(*report.failure, report.message);
}

std::vector<bool> rank1_certificate(const ParametrizedIO& io) {
  std::vector<bool> flags;
  flags.reserve(io.size());
  for (const auto& k : io.kraus()) {
    const EigenSystem es = eig_hermitian(hermitian_part(gram(k)));
    const auto above = (es.values.array() > tol::kAlgorithmic).count();
    flags.push_back(above == 1);
  }
  return flags;
}

bool is_rank1(const ParametrizedIO& io) {
  const auto flags = rank1_certificate(io);
  return std::all_of(flags.begin(), flags.end(), [](bool f) { return f; });
}

DensityMatrix apply_io(const ParametrizedIO& io, const DensityMatrix& rho,
                       double theta) {
  if (rho.dim() != io.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state and operation dimensions differ");
  }
  ComplexMatrix out = ComplexMatrix::Zero(io.out_dim(), io.out_dim());
  for (std::size_t x = 0; x < io.size(); ++x) {
    const ComplexMatrix e = io.kraus_matrix(x, theta);
    out += e * rho.matrix() * e.adjoint();
  }
  return normalized_state(out);
}

FisherDatum postselect_distribution(const ParametrizedIO& io,
                                    const DensityMatrix& rho) {
  if (rho.dim() != io.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state and operation dimensions differ");
  }
  const double residual = max_abs_diff(io.completeness_sum(io.theta0()),
                                       ComplexMatrix::Identity(io.dim(), io.dim()));
  if (residual > tol::kAlgorithmic) {
    std::ostringstream os;
    os << "operation incomplete at theta0 (residual " << residual << ")";
    throw Error(ErrorCode::InvalidIO, os.str());
  }
  const int d = io.dim();
  FisherDatum fd;
  fd.p.reserve(io.size());
  fd.d.reserve(io.size());
  for (const auto& k : io.kraus()) {
    // p = sum_{g(n)=g(m)} c_n rho_nm c_m^*, dp = -2 Im sum r_n c_n rho_nm c_m^*.
    Complex p = 0.0;
    Complex rated = 0.0;
    for (int n = 0; n < d; ++n) {
      if (k.c(n) == 0.0) continue;
      for (int m = 0; m < d; ++m) {
        if (k.g[n] != k.g[m]) continue;
        const Complex term = k.c(n) * rho(n, m) * std::conj(k.c(m));
        p += term;
        rated += k.r(n) * term;
      }
    }
    fd.p.push_back(p.real());
    fd.d.push_back(-2.0 * rated.imag());
  }
  try {
    check_fisher_datum(fd);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidIO, e.detail());
  }
  return fd;
}

ClassicalEnsemble postmeasurement_ensemble(std::span<const IncoherentKraus> kraus,
                                           const DensityMatrix& rho) {
  require_fixed_complete(kraus, rho.dim());
  const int out = label_space(kraus, rho.dim());
  ClassicalEnsemble ensemble;
  for (const auto& k : kraus) {
    const ComplexMatrix km = k.matrix(0.0, out);
    const ComplexMatrix branch = km * rho.matrix() * km.adjoint();
    const double t = branch.trace().real();
    if (t < tol::kExact) continue;
    ensemble.weights.push_back(t);
    ensemble.states.push_back(normalized_state(branch));
  }
  return ensemble;
}

DensityMatrix apply_kraus(std::span<const IncoherentKraus> kraus,
                          const DensityMatrix& rho) {
  require_fixed_complete(kraus, rho.dim());
  const int out = label_space(kraus, rho.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(out, out);
  for (const auto& k : kraus) {
    const ComplexMatrix km = k.matrix(0.0, out);
    sum += km * rho.matrix() * km.adjoint();
  }
  return normalized_state(sum);
}

ParametrizedIO refine_to_rank1(const ParametrizedIO& io) {
  require_valid(io);
  const int d = io.dim();
  std::vector<IncoherentKraus> refined;
  int next_label = 0;
  for (const auto& k : io.kraus()) {
    const EigenSystem es = eig_hermitian(hermitian_part(gram(k)));
    for (int i = 0; i < d; ++i) {
      if (es.values(i) < tol::kExact) continue;
      // <psi_i| = sqrt(lambda_i) v_i^dagger becomes the single output row.
      const ComplexVector row = std::sqrt(es.values(i)) * es.vectors.col(i).conjugate();
      refined.push_back(IncoherentKraus{std::vector<int>(d, next_label), row, k.r});
      ++next_label;
    }
  }
  return ParametrizedIO(d, io.theta0(), std::move(refined));
}

ParametrizedIO compose_after(const ParametrizedIO& io,
                             std::span<const IncoherentKraus> first) {
  if (first.empty()) throw Error(ErrorCode::InvalidIO, "empty Kraus set");
  const int d = first.front().dim();
  std::vector<IncoherentKraus> composed;
  for (const auto& e : io.kraus()) {
    for (const auto& k : first) {
      if (k.dim() != d || k.max_label() >= io.dim()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "fixed Kraus outputs do not fit the operation's input");
      }
      IncoherentKraus out{std::vector<int>(d), ComplexVector(d), RealVector(d)};
      for (int n = 0; n < d; ++n) {
        const int mid = k.g[n];
        out.g[n] = e.g[mid];
        out.c(n) = k.c(n) * e.c(mid);
        out.r(n) = e.r(mid);
      }
      composed.push_back(std::move(out));
    }
  }
  return ParametrizedIO(d, io.theta0(), std::move(composed));
}

ParametrizedIO witness_io(const DensityMatrix& rho, double theta0) {
  const int d = rho.dim();
  int j = -1;
  int k = -1;
  double best = tol::kClassify;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      if (std::abs(rho(a, b)) > best) {
        best = std::abs(rho(a, b));
        j = a;
        k = b;
      }
    }
  }
  if (j < 0) {
    throw Error(ErrorCode::StateIncoherent,
                "no off-diagonal entry exceeds 1e-9 in modulus");
  }
  const double alpha = std::arg(rho(j, k));
  const double gamma = std::numbers::pi / 4.0 - alpha - theta0;
  const Complex phase = std::polar(1.0, theta0 + gamma);
  const double amp = std::numbers::sqrt2 / 2.0;

  std::vector<int> identity_labels(d);
  for (int n = 0; n < d; ++n) identity_labels[n] = n;
  RealVector rate = RealVector::Zero(d);
  rate(j) = 1.0;

  IncoherentKraus e1{identity_labels, ComplexVector::Zero(d), rate};
  e1.g[k] = j;
  e1.c(j) = amp * phase;
  e1.c(k) = amp;

  IncoherentKraus e2{identity_labels, ComplexVector::Zero(d), rate};
  e2.g[j] = k;
  e2.c(j) = -amp * phase;
  e2.c(k) = amp;

  IncoherentKraus e3{identity_labels, ComplexVector::Ones(d), RealVector::Zero(d)};
  e3.c(j) = 0.0;
  e3.c(k) = 0.0;

  return ParametrizedIO(d, theta0, {std::move(e1), std::move(e2), std::move(e3)});
}

}  // namespace fishcoh
