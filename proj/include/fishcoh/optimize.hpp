#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fishcoh/iochannel.hpp"
#include "fishcoh/qcore.hpp"

namespace fishcoh {

/// One group of a structured rank-1 family. The group contributes one Kraus
/// operator per row k of frame:
///
///   E_k(theta) = |fresh label><w_k| D(theta),   <w_k| = row k of frame * diag(sqrt(delta)),
///   D(theta)   = diag(exp(i rate_n (theta - theta0))).
///
/// With orthonormal frame columns the group's completeness sum is diag(delta),
/// which D(theta) leaves untouched, so every theta is covered.
struct FamilyGroup {
  RealVector delta;
  ComplexMatrix frame;  // m x d, m >= d, orthonormal columns
  RealVector rate;
};

/// A point of the structured family: groups whose deltas sum to all-ones.
struct StructuredFamilyPoint {
  int dim = 0;
  std::vector<FamilyGroup> groups;

  std::size_t outcome_count() const;
};

/// Throws InvalidPoint unless sum_g delta_g = 1 and frame^dagger frame = I
/// (both to 1e-10), delta >= 0 and rates lie in [0, 1].
void check_point(const StructuredFamilyPoint& pt);

/// Emits the point's rank-1 Kraus operators, labels 0, 1, 2, ... in
/// (group, row) order. Rows of zero weight are skipped.
ParametrizedIO family_to_io(const StructuredFamilyPoint& pt, double theta0);

/// Post-selection FI of family_to_io(pt) on rho, or nullopt when some outcome
/// is singular (zero probability with non-zero derivative).
std::optional<double> fi_objective(const StructuredFamilyPoint& pt,
                                   const DensityMatrix& rho, double theta0);

/// Single group, delta = 1, frame = I, rate = 0: the dephasing operation.
StructuredFamilyPoint dephasing_point(int dim);

/// The optimal qubit strategy: U_theta = diag(e^{i theta}, 1) followed by a
/// projective measurement in the eigenbasis of the symmetric logarithmic
/// derivative.
StructuredFamilyPoint qubit_optimal_point(const DensityMatrix& rho);

/// Random start: Haar frames, delta from a flat simplex per slot, uniform
/// rates.
StructuredFamilyPoint random_family_point(int dim, int groups, int outcomes,
                                          Rng& rng);

struct OptimizerBudget {
  int restarts = 20;
  /// Group counts cycled over the restarts; empty means {1, 2, d}.
  std::vector<int> group_counts;
  /// Rows per group; 0 means d.
  int outcomes_per_group = 0;
  int max_iterations = 300;
  double gradient_step = 1e-6;
  std::uint64_t seed = 1;
  /// Starting points used by the first restarts instead of random ones.
  std::vector<StructuredFamilyPoint> seed_points;
  /// Run restarts on worker threads.
  bool parallel = true;
};

struct CoherenceReport {
  double lower_bound = 0.0;
  StructuredFamilyPoint best_point;
  int best_restart = -1;
  int restarts = 0;
  /// NaN marks a failed restart.
  std::vector<double> restart_values;
  std::vector<int> restart_group_counts;
  int failed_restarts = 0;
  std::optional<double> analytic_value;
  std::string analytic_provenance;
  std::string label;
  double theta0 = 0.0;
  std::vector<std::string> diagnostics;
};

/// Multi-restart projected gradient ascent of the post-selection FI over the
/// structured family. Every reported value is recomputed from an explicitly
/// validated ParametrizedIO, so lower_bound is a certified lower bound on the
/// measure; for qubits the closed-form value is attached. Deterministic for a
/// given budget.seed regardless of thread count.
CoherenceReport maximize_coherence(const DensityMatrix& rho, double theta0,
                                   const OptimizerBudget& budget);

/// SLD quantum Fisher information of the family E_theta(rho) induced by the
/// report's best point.
double qfi_of_best(const CoherenceReport& report, const DensityMatrix& rho);

}  // namespace fishcoh
