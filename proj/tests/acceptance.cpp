// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "fishcoh/axioms.hpp"
#include "fishcoh/fisher.hpp"
#include "fishcoh/optimize.hpp"
#include "fishcoh/parallel.hpp"
#include "fishcoh/repro.hpp"
#include "oracles.hpp"

using namespace fishcoh;

namespace {

constexpr double kF1Expected = 0.9410;
constexpr double kF1Tol = 5e-4;
constexpr double kF2Expected = 0.8889;
constexpr double kF2Tol = 1e-4;
constexpr double kF2ExactTol = 1e-12;
constexpr double kSeparation = 0.05;
constexpr double kFastSeconds = 1.0;
constexpr int kQubitStates = 200;
constexpr int kQubitRestarts = 20;
constexpr double kQubitRelative = 1e-2;
constexpr double kQubitExcess = 1e-9;
constexpr double kQubitSeconds = 120.0;
constexpr int kA1Samples = 100;
constexpr int kAxiomSamples = 500;
constexpr double kAxiomTol = 1e-9;
constexpr double kWitnessTol = 1e-6;
constexpr int kRefineTrials = 200;
constexpr double kRefineTol = 1e-12;
constexpr int kSandwichTrials = 200;
constexpr double kSandwichTol = 1e-9;
constexpr double kOptimumTol = 1e-6;
constexpr int kSandwichOptimumStates = 20;
constexpr int kNullStates = 100;
constexpr int kNullIos = 20;
constexpr double kNullTol = 1e-10;
constexpr int kThetaStates = 100;
constexpr double kThetaTol = 1e-12;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void guarded(int id, const char* name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  double f1 = 0.0, f2 = 0.0;

  guarded(1, "counterexample FI", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    f1 = classical_fi(postselect_distribution(build_counterexample_io(), counterexample_state()));
    const double dt = seconds_since(t0);
    report(1, "counterexample FI", std::abs(f1 - kF1Expected) <= kF1Tol && dt < kFastSeconds,
           fmt("F1 = %.12f, expected %.4f +- %.0e, %.4f s", f1, kF1Expected, kF1Tol, dt));
  });

  guarded(2, "unitary bound", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto opt = max_unitary_qfi_pure(counterexample_state());
    const double dt = seconds_since(t0);
    f2 = opt.value;
    const bool ok = std::abs(f2 - kF2Expected) <= kF2Tol && std::abs(f2 - 8.0 / 9.0) <= kF2ExactTol &&
                    dt < kFastSeconds;
    report(2, "unitary bound", ok,
           fmt("F2 = %.12f, |F2 - 8/9| = %.1e, h = (%g, %g, %g), %.4f s", f2, std::abs(f2 - 8.0 / 9.0),
               opt.generator.h(0), opt.generator.h(1), opt.generator.h(2), dt));
  });

  guarded(3, "separation", [&] {
    report(3, "separation", f1 - f2 >= kSeparation, fmt("F1 - F2 = %.6f (>= %.2f)", f1 - f2, kSeparation));
  });

  guarded(4, "qubit consistency", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> rel(kQubitStates), excess(kQubitStates);
    parallel_for(kQubitStates, [&](std::size_t i) {
      const auto rho = random_mixed_state(2, derive_seed(4, i));
      OptimizerBudget budget;
      budget.restarts = kQubitRestarts;
      budget.seed = derive_seed(40, i);
      budget.parallel = false;
      const auto rep = maximize_coherence(rho, 0.0, budget);
      const double exact = oracle::qubit_closed_form(rho.matrix());
      rel[i] = exact > 0 ? std::abs(rep.lower_bound - exact) / exact : rep.lower_bound;
      excess[i] = rep.lower_bound - exact;
    });
    const double dt = seconds_since(t0);
    const double worst_rel = *std::max_element(rel.begin(), rel.end());
    const double worst_excess = *std::max_element(excess.begin(), excess.end());
    report(4, "qubit consistency", worst_rel <= kQubitRelative && worst_excess <= kQubitExcess && dt < kQubitSeconds,
           fmt("%d states, R = %d: worst relative gap %.2e, worst excess %.2e, %.1f s", kQubitStates,
               kQubitRestarts, worst_rel, worst_excess, dt));
  });

  guarded(5, "axiom suite", [&] {
    AxiomSuiteConfig cfg;
    cfg.dims = {2};
    cfg.tolerances.nonnegativity = kAxiomTol;
    cfg.tolerances.witness = kWitnessTol;
    cfg.tolerances.monotonicity = kAxiomTol;
    cfg.tolerances.strong_monotonicity = kAxiomTol;
    cfg.tolerances.convexity = kAxiomTol;
    cfg.samples = kA1Samples;
    std::vector<AxiomVerdict> verdicts{check_nonnegativity(cfg)};
    cfg.samples = kAxiomSamples;
    verdicts.push_back(check_monotonicity(cfg));
    verdicts.push_back(check_strong_monotonicity(cfg));
    verdicts.push_back(check_convexity(cfg));
    bool ok = true;
    std::string detail;
    for (const auto& v : verdicts) {
      ok = ok && v.passed();
      if (!detail.empty()) detail += "; ";
      detail += fmt("%s %d/%d ok (worst margin %.1e)", std::string(to_string(v.axiom)).c_str(),
                    v.trials - static_cast<int>(v.failures.size()), v.trials, v.worst_margin);
    }
    report(5, "axiom suite", ok, detail);
  });

  guarded(6, "rank-1 refinement", [&] {
    Rng rng(6);
    double worst = 1e300;
    int violations = 0, non_rank1 = 0;
    for (int t = 0; t < kRefineTrials; ++t) {
      const auto io = oracle::random_g_io(3, rng, 0.0);
      if (!is_rank1(io)) ++non_rank1;
      const auto rho = random_pure_state(3, derive_seed(60, static_cast<std::uint64_t>(t)));
      const double before = classical_fi(postselect_distribution(io, rho));
      const double after = classical_fi(postselect_distribution(refine_to_rank1(io), rho));
      worst = std::min(worst, after - before);
      if (after < before - kRefineTol) ++violations;
    }
    report(6, "rank-1 refinement", violations == 0,
           fmt("%d qutrit IOs (%d not rank-1): min FI(refined) - FI = %.2e, %d violations", kRefineTrials,
               non_rank1, worst, violations));
  });

  guarded(7, "FI/QFI sandwich", [&] {
    Rng rng(7);
    double worst = -1e300;
    int violations = 0;
    for (int t = 0; t < kSandwichTrials; ++t) {
      const int d = 2 + t % 2;
      const auto io = oracle::random_structured_io(d, rng, 0.0);
      const auto rho = t % 3 == 0 ? random_pure_state(d, derive_seed(70, static_cast<std::uint64_t>(t)))
                                  : random_mixed_state(d, derive_seed(71, static_cast<std::uint64_t>(t)));
      const double fi = classical_fi(postselect_distribution(io, rho));
      const double qfi = qfi_sld(state_derivative(io, rho));
      worst = std::max(worst, fi - qfi);
      if (fi > qfi + kSandwichTol) ++violations;
    }
    double optimum_gap = 0.0;
    for (int s = 0; s < kSandwichOptimumStates; ++s) {
      const auto rho = random_mixed_state(2, derive_seed(72, static_cast<std::uint64_t>(s)));
      OptimizerBudget budget;
      budget.restarts = kQubitRestarts;
      budget.seed = static_cast<std::uint64_t>(s);
      const auto rep = maximize_coherence(rho, 0.0, budget);
      optimum_gap = std::max(optimum_gap, std::abs(rep.lower_bound - qfi_of_best(rep, rho)));
    }
    report(7, "FI/QFI sandwich", violations == 0 && optimum_gap <= kOptimumTol,
           fmt("%d structured IOs: max FI - QFI = %.2e, %d violations; qubit optimum |FI - QFI| <= %.2e",
               kSandwichTrials, worst, violations, optimum_gap));
  });

  guarded(8, "incoherence nullity", [&] {
    Rng rng(8);
    double worst = 0.0;
    for (int s = 0; s < kNullStates; ++s) {
      const int d = 2 + s % 3;
      const auto rho = oracle::random_incoherent_state(d, rng);
      for (int k = 0; k < kNullIos; ++k) {
        const auto io = k % 2 ? oracle::random_g_io(d, rng, 0.3) : oracle::random_structured_io(d, rng, 0.3);
        worst = std::max(worst, classical_fi(postselect_distribution(io, rho)));
      }
    }
    report(8, "incoherence nullity", worst <= kNullTol,
           fmt("%d states x %d IOs: max FI = %.2e", kNullStates, kNullIos, worst));
  });

  guarded(9, "theta0 invariance", [&] {
    double worst = 0.0;
    for (int s = 0; s < kThetaStates; ++s) {
      const auto rho = random_mixed_state(2, derive_seed(9, static_cast<std::uint64_t>(s)));
      const double base = qubit_coherence_analytic(rho, 0.0);
      for (double th : {0.7, 2.1}) worst = std::max(worst, std::abs(qubit_coherence_analytic(rho, th) - base));
    }
    report(9, "theta0 invariance", worst <= kThetaTol,
           fmt("%d qubits at theta0 in {0, 0.7, 2.1}: max difference %.1e", kThetaStates, worst));
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
