#include "fishcoh/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fishcoh/fisher.hpp"
#include "fishcoh/parallel.hpp"

namespace fishcoh {

namespace {

constexpr double kZeroProbability = 1e-14;
constexpr double kZeroDerivative = 1e-10;
constexpr double kMinStep = 1e-12;
constexpr double kMaxStep = 1.0;
constexpr double kStallTolerance = 1e-15;
constexpr int kStallLimit = 5;

// Unconstrained working copy of a family point. amp holds signed square
// roots of delta; the constraint set is: orthonormal frame columns, unit
// norm of (amp_{g,n})_g for every slot n, rates in [0, 1].
struct Iterate {
  std::vector<ComplexMatrix> frames;
  std::vector<RealVector> amps;
  std::vector<RealVector> rates;

  int groups() const { return static_cast<int>(frames.size()); }
};

Iterate to_iterate(const StructuredFamilyPoint& pt) {
  Iterate it;
  for (const auto& grp : pt.groups) {
    it.frames.push_back(grp.frame);
    it.amps.push_back(grp.delta.cwiseMax(0.0).cwiseSqrt());
    it.rates.push_back(grp.rate);
  }
  return it;
}

StructuredFamilyPoint to_point(const Iterate& it, int dim) {
  StructuredFamilyPoint pt;
  pt.dim = dim;
  for (int g = 0; g < it.groups(); ++g) {
    FamilyGroup grp{it.amps[g].cwiseAbs2(), it.frames[g], it.rates[g]};
    for (int n = 0; n < dim; ++n) {
      if (it.amps[g](n) < 0.0) grp.frame.col(n) *= -1.0;
    }
    pt.groups.push_back(std::move(grp));
  }
  return pt;
}

void retract(Iterate& it, int dim) {
  for (auto& f : it.frames) f = orthonormalize(f);
  for (auto& r : it.rates) r = r.cwiseMax(0.0).cwiseMin(1.0);
  for (int n = 0; n < dim; ++n) {
    double norm2 = 0.0;
    for (const auto& a : it.amps) norm2 += a(n) * a(n);
    if (norm2 <= 0.0) {
      for (auto& a : it.amps) a(n) = 1.0 / std::sqrt(static_cast<double>(it.groups()));
      continue;
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& a : it.amps) a(n) *= scale;
  }
}

// Post-selection FI of the rank-1 family straight from the iterate. Same
// formulas as postselect_distribution + classical_fi, without building the
// operation; returns -inf on a singular outcome.
double fast_objective(const Iterate& it, const ComplexMatrix& rho) {
  const Eigen::Index d = rho.rows();
  double fi = 0.0;
  ComplexVector c(d);
  for (int g = 0; g < it.groups(); ++g) {
    const ComplexMatrix& frame = it.frames[g];
    for (Eigen::Index k = 0; k < frame.rows(); ++k) {
      for (Eigen::Index n = 0; n < d; ++n) c(n) = frame(k, n) * it.amps[g](n);
      const ComplexVector t = rho * c.conjugate();
      Complex p = 0.0;
      Complex rated = 0.0;
      for (Eigen::Index n = 0; n < d; ++n) {
        const Complex term = c(n) * t(n);
        p += term;
        rated += it.rates[g](n) * term;
      }
      const double prob = p.real();
      const double deriv = -2.0 * rated.imag();
      if (prob <= kZeroProbability) {
        if (std::abs(deriv) <= kZeroDerivative) continue;
        return -std::numeric_limits<double>::infinity();
      }
      fi += deriv * deriv / prob;
    }
  }
  return fi;
}

// Visits every real coordinate of the iterate as a mutable reference.
template <typename Fn>
void for_each_coordinate(Iterate& it, Fn&& fn) {
  for (int g = 0; g < it.groups(); ++g) {
    auto& f = it.frames[g];
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      auto* parts = reinterpret_cast<double*>(&f.data()[i]);
      fn(parts[0]);
      fn(parts[1]);
    }
    for (Eigen::Index n = 0; n < it.amps[g].size(); ++n) fn(it.amps[g](n));
    for (Eigen::Index n = 0; n < it.rates[g].size(); ++n) fn(it.rates[g](n));
  }
}

std::vector<double> flatten(Iterate& it) {
  std::vector<double> v;
  for_each_coordinate(it, [&](double& x) { v.push_back(x); });
  return v;
}

void assign(Iterate& it, const std::vector<double>& v) {
  std::size_t i = 0;
  for_each_coordinate(it, [&](double& x) { x = v[i++]; });
}

std::vector<double> numeric_gradient(Iterate it, const ComplexMatrix& rho,
                                     double step) {
  std::vector<double> grad;
  for_each_coordinate(it, [&](double& x) {
    const double saved = x;
    x = saved + step;
    const double up = fast_objective(it, rho);
    x = saved - step;
    const double down = fast_objective(it, rho);
    x = saved;
    grad.push_back(std::isfinite(up) && std::isfinite(down) ? (up - down) / (2.0 * step)
                                                            : 0.0);
  });
  return grad;
}

Iterate ascend(Iterate it, const ComplexMatrix& rho, const OptimizerBudget& budget,
               int dim) {
  retract(it, dim);
  double value = fast_objective(it, rho);
  double step = 0.25;
  int stalls = 0;
  for (int iter = 0; iter < budget.max_iterations; ++iter) {
    const std::vector<double> grad = numeric_gradient(it, rho, budget.gradient_step);
    double norm = 0.0;
    for (double gi : grad) norm += gi * gi;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) break;

    const std::vector<double> base = flatten(it);
    bool improved = false;
    while (step >= kMinStep) {
      std::vector<double> trial_coords = base;
      for (std::size_t i = 0; i < base.size(); ++i) {
        trial_coords[i] += step * grad[i] / norm;
      }
      Iterate trial = it;
      assign(trial, trial_coords);
      retract(trial, dim);
      const double trial_value = fast_objective(trial, rho);
      if (trial_value > value) {
        stalls = trial_value - value < kStallTolerance * std::max(1.0, value) ? stalls + 1 : 0;
        it = std::move(trial);
        value = trial_value;
        step = std::min(kMaxStep, 2.0 * step);
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved || stalls >= kStallLimit) break;
  }
  return it;
}

std::vector<int> resolved_group_counts(const OptimizerBudget& budget, int dim) {
  std::vector<int> counts = budget.group_counts;
  if (counts.empty()) counts = {1, 2, dim};
  std::vector<int> unique;
  for (int c : counts) {
    if (c < 1) throw Error(ErrorCode::InvalidPoint, "group count must be >= 1");
    if (std::find(unique.begin(), unique.end(), c) == unique.end()) unique.push_back(c);
  }
  return unique;
}

}  // namespace

std::size_t StructuredFamilyPoint::outcome_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += static_cast<std::size_t>(g.frame.rows());
  return n;
}

void check_point(const StructuredFamilyPoint& pt) {
  const int d = pt.dim;
  if (d <= 0 || pt.groups.empty()) {
    throw Error(ErrorCode::InvalidPoint, "point needs a positive dimension and a group");
  }
  RealVector total = RealVector::Zero(d);
  for (std::size_t g = 0; g < pt.groups.size(); ++g) {
    const auto& grp = pt.groups[g];
    const std::string where = "group " + std::to_string(g) + ": ";
    if (grp.delta.size() != d || grp.rate.size() != d || grp.frame.cols() != d ||
        grp.frame.rows() < d) {
      throw Error(ErrorCode::InvalidPoint, where + "shape mismatch");
    }
    if (grp.delta.minCoeff() < -tol::kExact) {
      throw Error(ErrorCode::InvalidPoint, where + "negative delta");
    }
    if (grp.rate.minCoeff() < 0.0 || grp.rate.maxCoeff() > 1.0) {
      throw Error(ErrorCode::InvalidPoint, where + "rate outside [0, 1]");
    }
    const double ortho =
        max_abs_diff(grp.frame.adjoint() * grp.frame, ComplexMatrix::Identity(d, d));
    if (ortho > tol::kAlgorithmic) {
      std::ostringstream os;
      os << where << "frame columns not orthonormal (" << ortho << ")";
      throw Error(ErrorCode::InvalidPoint, os.str());
    }
    total += grp.delta;
  }
  const double slack = (total - RealVector::Ones(d)).cwiseAbs().maxCoeff();
  if (slack > tol::kAlgorithmic) {
    std::ostringstream os;
    os << "deltas do not sum to one (" << slack << ")";
    throw Error(ErrorCode::InvalidPoint, os.str());
  }
}

ParametrizedIO family_to_io(const StructuredFamilyPoint& pt, double theta0) {
  check_point(pt);
  const int d = pt.dim;
  std::vector<IncoherentKraus> kraus;
  int label = 0;
  for (const auto& grp : pt.groups) {
    const RealVector amp = grp.delta.cwiseMax(0.0).cwiseSqrt();
    for (Eigen::Index k = 0; k < grp.frame.rows(); ++k) {
      ComplexVector row = grp.frame.row(k).transpose().cwiseProduct(amp.cast<Complex>());
      if (row.squaredNorm() < kNegligibleKrausWeight) continue;
      kraus.push_back(IncoherentKraus::make(std::vector<int>(d, label), std::move(row), grp.rate));
      ++label;
    }
  }
  return ParametrizedIO(d, theta0, std::move(kraus));
}

std::optional<double> fi_objective(const StructuredFamilyPoint& pt,
                                   const DensityMatrix& rho, double theta0) {
  const ParametrizedIO io = family_to_io(pt, theta0);
  try {
    return classical_fi(postselect_distribution(io, rho));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularOutcome) return std::nullopt;
    throw;
  }
}

StructuredFamilyPoint dephasing_point(int dim) {
  StructuredFamilyPoint pt;
  pt.dim = dim;
  pt.groups.push_back(FamilyGroup{RealVector::Ones(dim), ComplexMatrix::Identity(dim, dim),
                                  RealVector::Zero(dim)});
  return pt;
}

StructuredFamilyPoint qubit_optimal_point(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error(ErrorCode::WrongDimension, "qubit optimal point needs dim 2");
  }
  RealVector h(2);
  h << 1.0, 0.0;
  const StateDerivativePair sd = unitary_family(rho, DiagonalGenerator::make(h), 0.0);
  const EigenSystem es = eig_hermitian(rho.matrix());
  // SLD in the eigenbasis of rho: L_ij = 2 drho_ij / (lambda_i + lambda_j).
  ComplexMatrix dm = es.vectors.adjoint() * sd.drho * es.vectors;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      const double denom = es.values(i) + es.values(j);
      dm(i, j) = denom > 1e-12 ? 2.0 * dm(i, j) / denom : Complex(0.0);
    }
  }
  const ComplexMatrix sld = hermitian_part(es.vectors * dm * es.vectors.adjoint());
  const EigenSystem basis = eig_hermitian(sld);
  StructuredFamilyPoint pt;
  pt.dim = 2;
  pt.groups.push_back(FamilyGroup{RealVector::Ones(2), basis.vectors.adjoint(), h});
  return pt;
}

StructuredFamilyPoint random_family_point(int dim, int groups, int outcomes, Rng& rng) {
  if (groups < 1 || outcomes < dim) {
    throw Error(ErrorCode::InvalidPoint, "need >= 1 group and >= dim outcomes per group");
  }
  StructuredFamilyPoint pt;
  pt.dim = dim;
  std::vector<RealVector> deltas(groups, RealVector(dim));
  for (int n = 0; n < dim; ++n) {
    double total = 0.0;
    for (int g = 0; g < groups; ++g) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      deltas[g](n) = -std::log(u);
      total += deltas[g](n);
    }
    for (int g = 0; g < groups; ++g) deltas[g](n) /= total;
  }
  for (int g = 0; g < groups; ++g) {
    ComplexMatrix frame = random_orthonormal_frame(outcomes, dim, rng);
    RealVector rate(dim);
    for (int n = 0; n < dim; ++n) rate(n) = rng.uniform();
    pt.groups.push_back(FamilyGroup{deltas[g], std::move(frame), std::move(rate)});
  }
  return pt;
}

CoherenceReport maximize_coherence(const DensityMatrix& rho, double theta0,
                                   const OptimizerBudget& budget) {
  const int d = rho.dim();
  if (budget.restarts < 1) throw Error(ErrorCode::InvalidPoint, "restarts must be >= 1");
  const std::vector<int> counts = resolved_group_counts(budget, d);
  const int outcomes = budget.outcomes_per_group > 0 ? budget.outcomes_per_group : d;
  for (const auto& seed_pt : budget.seed_points) check_point(seed_pt);

  const auto restarts = static_cast<std::size_t>(budget.restarts);
  std::vector<std::optional<StructuredFamilyPoint>> finals(restarts);
  std::vector<double> values(restarts, std::numeric_limits<double>::quiet_NaN());
  std::vector<int> group_counts(restarts, 0);
  std::vector<std::string> notes(restarts);

  auto run = [&](std::size_t r) {
    StructuredFamilyPoint start;
    if (r < budget.seed_points.size()) {
      start = budget.seed_points[r];
    } else {
      Rng rng(derive_seed(budget.seed, r));
      start = random_family_point(d, counts[r % counts.size()], outcomes, rng);
    }
    group_counts[r] = static_cast<int>(start.groups.size());
    const Iterate best = ascend(to_iterate(start), rho.matrix(), budget, d);
    try {
      StructuredFamilyPoint pt = to_point(best, d);
      require_valid(family_to_io(pt, theta0));
      const auto value = fi_objective(pt, rho, theta0);
      if (!value) {
        notes[r] = "restart " + std::to_string(r) + ": singular outcome at final point";
        return;
      }
      values[r] = *value;
      finals[r] = std::move(pt);
    } catch (const Error& e) {
      notes[r] = "restart " + std::to_string(r) + ": " + e.what();
    }
  };
  if (budget.parallel) {
    parallel_for(restarts, run);
  } else {
    for (std::size_t r = 0; r < restarts; ++r) run(r);
  }

  CoherenceReport report;
  report.theta0 = theta0;
  report.restarts = budget.restarts;
  report.restart_values = values;
  report.restart_group_counts = group_counts;
  for (std::size_t r = 0; r < restarts; ++r) {
    if (!finals[r]) {
      ++report.failed_restarts;
      report.diagnostics.push_back(notes[r]);
      continue;
    }
    if (report.best_restart < 0 || values[r] > report.lower_bound) {
      report.lower_bound = values[r];
      report.best_restart = static_cast<int>(r);
    }
  }
  if (report.best_restart >= 0) {
    report.best_point = *finals[static_cast<std::size_t>(report.best_restart)];
  } else {
    report.best_point = dephasing_point(d);
    report.lower_bound = 0.0;
    report.diagnostics.push_back("all restarts failed; reporting the dephasing operation");
  }

  if (d == 2) {
    report.analytic_value = qubit_coherence_analytic(rho, theta0);
    report.analytic_provenance = "qubit closed form: SLD QFI under diag(e^{i theta}, 1)";
    report.label = "exact (qubit)";
    if (report.lower_bound > *report.analytic_value + 1e-9) {
      report.diagnostics.push_back("lower bound exceeds the qubit closed form");
    }
  } else {
    report.label = "certified lower bound";
  }
  return report;
}

double qfi_of_best(const CoherenceReport& report, const DensityMatrix& rho) {
  return qfi_sld(state_derivative(family_to_io(report.best_point, report.theta0), rho));
}

}  // namespace fishcoh
