#pragma once

// 1-D quadrature rules, Richardson extrapolation, and deterministic summation.

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "horokit/types.hpp"

namespace horokit {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [-1,1], computed by Newton iteration on P_n and cached.
inline const Rule1D& gauss_legendre_unit(int n) {
  if (n < 1) throw input_error("gauss_legendre: n >= 1 required");
  static std::map<int, Rule1D> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

inline Rule1D gauss_legendre(int n, double a, double b) {
  const Rule1D& u = gauss_legendre_unit(n);
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (b - a) * (u.nodes[i] + 1.0) + a;
    r.weights[i] = 0.5 * (b - a) * u.weights[i];
  }
  return r;
}

// Uniform rule for periodic integrands on [a, b) (trapezoid == midpoint, spectral).
inline Rule1D periodic_uniform(int n, double a, double b) {
  if (n < 1) throw input_error("periodic_uniform: n >= 1 required");
  Rule1D r;
  r.nodes.resize(n);
  r.weights.assign(n, (b - a) / n);
  for (int i = 0; i < n; ++i) r.nodes[i] = a + (b - a) * i / n;
  return r;
}

// Iterated first-order Richardson extrapolation on a ladder eps_k = eps_0 * 2^{-k}.
template <typename T>
inline T richardson_halving(const std::vector<T>& vals) {
  if (vals.empty()) throw input_error("richardson: empty ladder");
  std::vector<T> v = vals;
  for (size_t order = 1; order < vals.size(); ++order) {
    const double f = std::pow(2.0, static_cast<double>(order));
    std::vector<T> next(v.size() - 1);
    for (size_t i = 0; i + 1 < v.size(); ++i) next[i] = (f * v[i + 1] - v[i]) / (f - 1.0);
    v = std::move(next);
  }
  return v.back();
}

// Deterministic pairwise summation (used for all parallel reductions).
template <typename T>
inline T pairwise_sum(std::vector<T> v) {
  if (v.empty()) return T{};
  size_t n = v.size();
  while (n > 1) {
    const size_t half = (n + 1) / 2;
    for (size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
    n = half;
  }
  return v[0];
}

}  // namespace horokit
