#pragma once

#include <string>
#include <vector>

#include "fishcoh/iochannel.hpp"
#include "fishcoh/optimize.hpp"

namespace fishcoh {

/// (1, 1, 1) / sqrt(3).
DensityMatrix counterexample_state();

/// The nine rank-1 Kraus operators separating the measure from unitary QFI
/// on the maximally coherent qutrit. Rows are built from sqrt(0.4),
/// sqrt(0.6) and the cube roots of unity; x = 1..3 carry rates (0, 1, 0),
/// x = 4..9 carry (1, 0, 0). Each operator gets its own output label.
ParametrizedIO build_counterexample_io();

/// The same operation as a three-group structured family point (Fourier
/// frames, deltas (0, .4, .6), (.4, .6, 0), (.6, 0, .4)).
StructuredFamilyPoint counterexample_point();

struct GoldenCase {
  std::string name;
  double expected = 0.0;
  double tolerance = 0.0;
  double computed = 0.0;
  std::string provenance;
  bool passed = false;
};

struct GoldenCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct GoldenReport {
  std::vector<GoldenCase> cases;
  std::vector<GoldenCheck> checks;
  bool all_passed = false;
};

struct GoldenOptions {
  int qubit_states = 50;
  int qubit_restarts = 20;
  std::uint64_t seed = 20220101;
};

/// Recomputes the reference values F1 = 0.9410 and F2 = 0.8889, their separation,
/// and optimizer-vs-closed-form agreement on random qubits.
GoldenReport run_golden_suite(const GoldenOptions& options = {});

}  // namespace fishcoh
