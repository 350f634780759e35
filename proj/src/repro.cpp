#include "fishcoh/repro.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fishcoh/fisher.hpp"
#include "fishcoh/parallel.hpp"

namespace fishcoh {

namespace {

Complex root_of_unity(int thirds) {
  return std::polar(1.0, 2.0 * std::numbers::pi * thirds / 3.0);
}

// Rows A^x * sqrt(3) with x = 1..9.
std::vector<ComplexVector> counterexample_rows() {
  const double a = std::sqrt(0.4);
  const double b = std::sqrt(0.6);
  auto row = [](Complex x, Complex y, Complex z) {
    ComplexVector v(3);
    v << x, y, z;
    return v;
  };
  return {
      row(0.0, a, b),
      row(0.0, a * root_of_unity(-1), b * root_of_unity(1)),
      row(0.0, a * root_of_unity(-2), b * root_of_unity(2)),
      row(a, b, 0.0),
      row(a, b * root_of_unity(1), 0.0),
      row(a, b * root_of_unity(2), 0.0),
      row(b, 0.0, a),
      row(b, 0.0, a * root_of_unity(1)),
      row(b, 0.0, a * root_of_unity(2)),
  };
}

RealVector rate(double r1, double r2, double r3) {
  RealVector v(3);
  v << r1, r2, r3;
  return v;
}

// Columns f_j(k) = exp(2 pi i j k / 3) / sqrt(3).
ComplexMatrix fourier_frame(int j0, int j1, int j2) {
  ComplexMatrix f(3, 3);
  const int js[3] = {j0, j1, j2};
  for (int k = 0; k < 3; ++k) {
    for (int col = 0; col < 3; ++col) {
      f(k, col) = root_of_unity(js[col] * k) / std::sqrt(3.0);
    }
  }
  return f;
}

}  // namespace

DensityMatrix counterexample_state() {
  return DensityMatrix::from_pure(ComplexVector::Ones(3));
}

ParametrizedIO build_counterexample_io() {
  const auto rows = counterexample_rows();
  std::vector<IncoherentKraus> kraus;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const RealVector r = x < 3 ? rate(0, 1, 0) : rate(1, 0, 0);
    kraus.push_back(IncoherentKraus::make(std::vector<int>(3, static_cast<int>(x)),
                                          rows[x] / std::sqrt(3.0), r));
  }
  return ParametrizedIO(3, 0.0, std::move(kraus));
}

StructuredFamilyPoint counterexample_point() {
  StructuredFamilyPoint pt;
  pt.dim = 3;
  pt.groups.push_back(FamilyGroup{rate(0.0, 0.4, 0.6), fourier_frame(0, -1, 1), rate(0, 1, 0)});
  pt.groups.push_back(FamilyGroup{rate(0.4, 0.6, 0.0), fourier_frame(0, 1, -1), rate(1, 0, 0)});
  pt.groups.push_back(FamilyGroup{rate(0.6, 0.0, 0.4), fourier_frame(0, -1, 1), rate(1, 0, 0)});
  return pt;
}

GoldenReport run_golden_suite(const GoldenOptions& options) {
  GoldenReport report;
  const DensityMatrix phi = counterexample_state();

  const double f1 = classical_fi(postselect_distribution(build_counterexample_io(), phi));
  report.cases.push_back(GoldenCase{"counterexample_fi", 0.9410, 5e-4, f1,
                                    "maximally coherent qutrit, nine-operator IO: F1 = 0.9410",
                                    std::abs(f1 - 0.9410) <= 5e-4});

  const double f2 = max_unitary_qfi_pure(phi).value;
  report.cases.push_back(GoldenCase{"unitary_qfi_bound", 0.8889, 1e-4, f2,
                                    "maximally coherent qutrit, best diagonal generator: F2 = 0.8889",
                                    std::abs(f2 - 0.8889) <= 1e-4});

  report.checks.push_back(GoldenCheck{"separation", f1 - f2 >= 0.05, f1 - f2,
                                      "F1 - F2 >= 0.05 (measure exceeds unitary QFI)"});

  const auto n = static_cast<std::size_t>(options.qubit_states);
  std::vector<double> rel_error(n, 0.0);
  std::vector<double> excess(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const DensityMatrix rho = random_mixed_state(2, derive_seed(options.seed, i));
    OptimizerBudget budget;
    budget.restarts = options.qubit_restarts;
    budget.seed = derive_seed(options.seed ^ 0x5eedULL, i);
    budget.parallel = false;
    const CoherenceReport rep = maximize_coherence(rho, 0.0, budget);
    const double exact = *rep.analytic_value;
    rel_error[i] = exact > 0.0 ? std::abs(rep.lower_bound - exact) / exact : rep.lower_bound;
    excess[i] = rep.lower_bound - exact;
  });
  double worst_rel = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    worst_rel = std::max(worst_rel, rel_error[i]);
    worst_excess = std::max(worst_excess, excess[i]);
  }
  std::ostringstream os;
  os << n << " random qubits: worst relative gap " << worst_rel
     << ", worst excess over closed form " << worst_excess;
  report.checks.push_back(GoldenCheck{"qubit_consistency",
                                      worst_rel <= 1e-2 && worst_excess <= 1e-9, worst_rel,
                                      os.str()});

  report.all_passed = true;
  for (const auto& c : report.cases) report.all_passed = report.all_passed && c.passed;
  for (const auto& c : report.checks) report.all_passed = report.all_passed && c.passed;
  return report;
}

}  // namespace fishcoh
