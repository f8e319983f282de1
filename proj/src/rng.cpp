#include "onlinearc/rng.hpp"

#include <cmath>

namespace oarc {

namespace {

std::seed_seq make_seq(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint32_t tag) {
  return std::seed_seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                       static_cast<std::uint32_t>(a),      static_cast<std::uint32_t>(a >> 32),
                       static_cast<std::uint32_t>(b),      static_cast<std::uint32_t>(b >> 32),
                       tag};
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq = make_seq(seed, 0, 0, 0u);
  engine_.seed(seq);
}

Rng Rng::substream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq = make_seq(master, a, b, 1u);
  return Rng(seq);
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace oarc
