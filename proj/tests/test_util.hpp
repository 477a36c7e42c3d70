#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "banditlab/linalg.hpp"
#include "banditlab/rng.hpp"

namespace banditlab::testutil {

inline Vec normalized(Vec v) {
  const double n = norm2(v);
  if (n == 0.0) throw std::invalid_argument("zero vector");
  for (double& x : v) x /= n;
  return v;
}

inline SymMatrix random_sym(Rng& rng, std::size_t d, double scale) {
  SymMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) m.set(i, j, scale * rng.normal());
  return m;
}

inline SymMatrix random_pd(Rng& rng, std::size_t d, double ridge) {
  std::vector<Vec> g(d);
  for (Vec& row : g) row = rng.gaussian_vector(d);
  SymMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j)
      m.set(i, j, dot(g[i], g[j]) / static_cast<double>(d));
  m.add_scaled_identity(ridge);
  return m;
}

// Coarse direction grid plus shrinking local refinements; an optimizer-free
// reference for the closed-form and trust-region maximizers under test.
inline double direction_grid_max(std::size_t d,
                                 const std::function<double(const Vec&)>& g) {
  double best = -std::numeric_limits<double>::infinity();
  Vec bestv;
  auto consider = [&](const Vec& v) {
    const double val = g(v);
    if (val > best) {
      best = val;
      bestv = v;
    }
  };
  if (d == 2) {
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * i / n;
      consider({std::cos(a), std::sin(a)});
    }
    double w = 2.0 * std::numbers::pi / n;
    for (int round = 0; round < 4; ++round) {
      const double a0 = std::atan2(bestv[1], bestv[0]);
      for (int k = -16; k <= 16; ++k)
        consider({std::cos(a0 + w * k / 16.0), std::sin(a0 + w * k / 16.0)});
      w *= 0.12;
    }
  } else if (d == 3) {
    const int n = 20000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      consider({r * std::cos(golden * i), r * std::sin(golden * i), z});
    }
    double w = 0.06;
    for (int round = 0; round < 4; ++round) {
      const Vec c = bestv;
      Vec t1 = std::abs(c[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
      t1 = normalized(sub(t1, scaled(c, dot(t1, c))));
      const Vec t2 = {c[1] * t1[2] - c[2] * t1[1], c[2] * t1[0] - c[0] * t1[2],
                      c[0] * t1[1] - c[1] * t1[0]};
      for (int a = -8; a <= 8; ++a)
        for (int b = -8; b <= 8; ++b)
          consider(normalized(
              add(c, add(scaled(t1, w * a / 8.0), scaled(t2, w * b / 8.0)))));
      w *= 0.12;
    }
  } else {
    throw std::invalid_argument("direction_grid_max supports d = 2 or 3");
  }
  return best;
}

}  // namespace banditlab::testutil
