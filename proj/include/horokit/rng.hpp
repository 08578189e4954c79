#pragma once

// Seeded random sampling helpers (mt19937_64: identical streams on every platform).

#include <random>

#include "horokit/types.hpp"

namespace horokit {

struct Rng {
  std::mt19937_64 gen;

  explicit Rng(uint64_t seed) : gen(seed) {}

  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(gen);
  }

  double normal() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(gen);
  }

  Vec gaussian_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Vec unit_vec(int n) {
    Vec v = gaussian_vec(n);
    while (v.norm() < 1e-8) v = gaussian_vec(n);
    return v / v.norm();
  }
};

}  // namespace horokit
