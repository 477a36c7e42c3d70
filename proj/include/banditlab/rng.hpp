#pragma once

#include <cstdint>
#include <random>

#include "banditlab/linalg.hpp"

namespace banditlab {

// Deterministic stream: trial/agent k of an experiment with master seed s draws
// from Rng(s + k). mt19937_64 sequences are fixed by the standard, so the only
// platform dependence left is the distribution shaping in libstdc++.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  return master_seed + index;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform01() { return uniform_(engine_); }

  std::uint64_t uniform_index(std::uint64_t n) {
    std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
    return dist(engine_);
  }

  double gamma(double shape) {
    std::gamma_distribution<double> dist(shape, 1.0);
    return dist(engine_);
  }

  Vec gaussian_vector(std::size_t d) {
    Vec v(d);
    for (double& x : v) x = normal();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace banditlab
