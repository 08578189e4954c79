#pragma once

// Quadratic form linear algebra for the spaces X_{p,q} = { x : sum_j delta_j x_j^2 = 1 },
// delta_j = +1 for j < p, -1 otherwise (0-based).

#include <cmath>

#include "horokit/types.hpp"

namespace horokit {

struct QuadraticSpace {
  int p = 0;
  int q = 0;

  QuadraticSpace(int p_, int q_) : p(p_), q(q_) {
    if (p < 1 || q < 0 || p + q < 2) throw input_error("QuadraticSpace: need p >= 1, q >= 0, n >= 2");
  }

  int n() const { return p + q; }

  double delta(int j) const {
    if (j < 0 || j >= n()) throw input_error("QuadraticSpace::delta: index out of range");
    return j < p ? 1.0 : -1.0;
  }

  template <typename A, typename B>
  auto pairing(const A& u, const B& v) const {
    if (u.size() != n() || v.size() != n()) throw input_error("pairing: dimension mismatch");
    decltype(u[0] * v[0]) s{};
    for (int j = 0; j < n(); ++j) s += delta(j) * u[j] * v[j];
    return s;
  }

  double quad_form(const Vec& v) const { return pairing(v, v); }
  cplx quad_form(const CVec& v) const { return pairing(v, v); }

  bool is_isotropic(const CVec& v, double tol = 1e-10) const {
    return std::abs(quad_form(v)) <= tol * v.squaredNorm();
  }
  bool is_isotropic(const Vec& v, double tol = 1e-10) const {
    return std::abs(quad_form(v)) <= tol * v.squaredNorm();
  }
};

// One-parameter rotation (delta_i == delta_j) or boost (delta_i != delta_j) in the (i,j)
// coordinate plane; preserves the form exactly in exact arithmetic.
inline Mat group_element(const QuadraticSpace& Q, int i, int j, double t) {
  const int n = Q.n();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw input_error("group_element: bad plane indices");
  Mat g = Mat::Identity(n, n);
  if (Q.delta(i) == Q.delta(j)) {
    const double c = std::cos(t), s = std::sin(t);
    g(i, i) = c;
    g(i, j) = -s;
    g(j, i) = s;
    g(j, j) = c;
  } else {
    const double c = std::cosh(t), s = std::sinh(t);
    g(i, i) = c;
    g(i, j) = s;
    g(j, i) = s;
    g(j, j) = c;
  }
  return g;
}

}  // namespace horokit
