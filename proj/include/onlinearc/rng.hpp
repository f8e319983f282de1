#pragma once

// Reproducible random streams. The engine is std::mt19937_64 seeded through
// std::seed_seq, both fully specified by the standard; the uniform and normal
// transforms are written out here so draws do not depend on the standard
// library's distribution implementations.

#include <cstdint>
#include <random>

namespace oarc {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream keyed by (master, a, b), e.g. (seed, pi index, trial).
  static Rng substream(std::uint64_t master, std::uint64_t a, std::uint64_t b);

  std::uint64_t next() { return engine_(); }
  /// ((x >> 11) + 0.5) * 2^-53: uniform on (0, 1), never 0 or 1.
  double uniform();
  /// Standard normal via the Marsaglia polar method.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  Rng(std::seed_seq& seq) : engine_(seq) {}

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace oarc
