#pragma once

#include <vector>

namespace fishcoh {

/// Outcome probabilities p(x|theta0) and their theta-derivatives at theta0.
struct FisherDatum {
  std::vector<double> p;
  std::vector<double> d;

  std::size_t size() const { return p.size(); }
};

/// Throws InvalidDatum if lengths differ, some p < -1e-12, sum(p) is not 1 or
/// sum(d) is not 0 (both within 1e-10).
void check_fisher_datum(const FisherDatum& fd);

}  // namespace fishcoh
