#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fishcoh/iochannel.hpp"
#include "fishcoh/optimize.hpp"

namespace fishcoh {

enum class Axiom { NonNegativity, Monotonicity, StrongMonotonicity, Convexity };

std::string_view to_string(Axiom axiom);

struct AxiomTolerances {
  double nonnegativity = 1e-9;
  /// Coherent states must have a witness FI above this.
  double witness = 1e-6;
  double monotonicity = 1e-9;
  double strong_monotonicity = 1e-9;
  double convexity = 1e-9;
  /// Violations below this are optimizer noise when d >= 3.
  double lower_bound_slack = 1e-2;
};

/// Small optimizer budget used as the d >= 3 evaluator.
inline OptimizerBudget lower_bound_budget() {
  OptimizerBudget b;
  b.restarts = 4;
  b.max_iterations = 150;
  b.parallel = false;
  return b;
}

struct AxiomSuiteConfig {
  std::vector<int> dims{2};
  int samples = 500;
  std::uint64_t seed = 2024;
  /// Evaluator for d >= 3; d = 2 always uses the closed form.
  OptimizerBudget budget = lower_bound_budget();
  AxiomTolerances tolerances;

  /// Throws InvalidDatum unless samples >= 1, dims >= 2 and tolerances > 0.
  void check() const;
};

/// Everything needed to replay one trial deterministically.
struct TrialRecord {
  std::uint64_t seed = 0;
  int dim = 0;
  int trial = 0;
  /// margin = allowed side - measured side; negative means violated.
  double margin = 0.0;
  ComplexMatrix state;
  std::vector<IncoherentKraus> operation;
  std::string detail;
};

struct AxiomVerdict {
  Axiom axiom = Axiom::NonNegativity;
  int trials = 0;
  std::vector<TrialRecord> failures;
  /// d >= 3 violations beyond optimizer slack; never counted as failures.
  std::vector<TrialRecord> suspicious;
  double worst_margin = 0.0;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
};

/// Coherence measure used by the harness: closed form for qubits, optimizer
/// lower bound otherwise.
double evaluate_measure(const DensityMatrix& rho, const AxiomSuiteConfig& cfg,
                        std::uint64_t seed);

/// Random theta-independent incoherent Kraus set: 1-3 operators with uniform
/// label maps and complex normal coefficients, scaled so sum K^dagger K <= I,
/// then completed by rank-1 operators |i><v_i| from the eigenvectors of the
/// remainder I - sum K^dagger K.
std::vector<IncoherentKraus> random_incoherent_kraus(int dim, Rng& rng);

/// Per-trial seed: derive_seed(cfg.seed, axiom << 40 | dim << 32 | trial).
std::uint64_t trial_seed(const AxiomSuiteConfig& cfg, Axiom axiom, int dim, int trial);

/// Re-runs one trial from its seed.
TrialRecord replay_trial(Axiom axiom, std::uint64_t seed, int dim, int trial,
                         const AxiomSuiteConfig& cfg);

/// Incoherent samples must have measure <= tol; coherent samples must admit a
/// witness operation with FI > tolerances.witness. Runs cfg.samples of each.
AxiomVerdict check_nonnegativity(const AxiomSuiteConfig& cfg);
/// C(sum K rho K^dagger) <= C(rho) over random incoherent Kraus sets.
AxiomVerdict check_monotonicity(const AxiomSuiteConfig& cfg);
/// sum_l t_l C(rho_l) <= C(rho) over post-measurement ensembles.
AxiomVerdict check_strong_monotonicity(const AxiomSuiteConfig& cfg);
/// C(sum p_i rho_i) <= sum p_i C(rho_i) over mixtures of 2-4 states.
AxiomVerdict check_convexity(const AxiomSuiteConfig& cfg);

std::vector<AxiomVerdict> run_axiom_suite(const AxiomSuiteConfig& cfg);

}  // namespace fishcoh
