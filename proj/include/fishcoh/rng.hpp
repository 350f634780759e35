#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>

namespace fishcoh {

/// Seedable generator with a fully specified output sequence.
///
/// Bits come from std::mt19937_64, whose sequence is fixed by the standard.
/// Uniform doubles take the top 53 bits; normals use the Box-Muller
/// transform (both outputs of a pair are consumed). The library never uses
/// std::*_distribution, whose algorithms are implementation-defined, so a
/// given seed yields the same numbers on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();

  /// Standard normal.
  double normal();

  /// Complex standard normal, E|z|^2 = 1.
  std::complex<double> complex_normal();

  /// Uniform integer in [0, n).
  int uniform_int(int n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Derives an independent stream seed: splitmix64(base ^ splitmix64(stream)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace fishcoh
