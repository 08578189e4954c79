#pragma once

// Test functions on X_{p,q}: smooth compactly supported bumps (chordal-distance
// supports), real spherical harmonics on S^{n-1}, and linear combinations.

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "horokit/types.hpp"

namespace horokit {

// Ambient euclidean ball containing (part of) the support of a compact function.
struct SupportBall {
  Vec center;
  double radius = 0.0;
};

struct TestFunction {
  std::function<double(const Vec&)> eval;
  bool compact = false;
  std::vector<SupportBall> support;  // union of balls covering supp f (compact only)

  double operator()(const Vec& x) const { return eval(x); }
};

// C0-infinity mollifier profile on [0,1).
inline double bump_profile(double s2) {
  if (s2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s2));
}

// Bump of chordal radius r centered at c (c should lie on X).
inline TestFunction make_bump(const Vec& c, double r) {
  if (r <= 0) throw input_error("make_bump: radius must be positive");
  TestFunction f;
  f.compact = true;
  f.support.push_back({c, r});
  f.eval = [c, r](const Vec& x) { return bump_profile((x - c).squaredNorm() / (r * r)); };
  return f;
}

// Reflected/even/odd variants used by the reconstruction suites.
inline TestFunction make_even_part(const TestFunction& f) {
  TestFunction g;
  g.compact = f.compact;
  g.support = f.support;
  for (const auto& b : f.support) g.support.push_back({-b.center, b.radius});
  auto ev = f.eval;
  g.eval = [ev](const Vec& x) { return 0.5 * (ev(x) + ev(-x)); };
  return g;
}

inline TestFunction make_odd_part(const TestFunction& f) {
  TestFunction g = make_even_part(f);
  auto ev = f.eval;
  g.eval = [ev](const Vec& x) { return 0.5 * (ev(x) - ev(-x)); };
  return g;
}

// Real orthonormal spherical harmonic Y_{l,m} on S^2 (convention: pole along e3,
// azimuth atan2(x2, x1); m>0 cosine, m<0 sine branch).
inline double real_sphere_harmonic(int l, int m, const Vec& x) {
  if (x.size() != 3) throw input_error("real_sphere_harmonic: S^2 only");
  const int am = std::abs(m);
  if (l < 0 || am > l) throw input_error("real_sphere_harmonic: need |m| <= l");
  double ct = x[2] / x.norm();
  ct = std::max(-1.0, std::min(1.0, ct));
  const double phi = std::atan2(x[1], x[0]);
  double lgr = std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0);
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * std::exp(lgr));
  const double plm = std::assoc_legendre(l, am, ct);
  if (m == 0) return norm * plm;
  const double ang = (m > 0) ? std::cos(am * phi) : std::sin(am * phi);
  return std::sqrt(2.0) * norm * plm * ang;
}

inline TestFunction make_sphere_harmonic(int l, int m) {
  TestFunction f;
  f.compact = false;
  f.eval = [l, m](const Vec& x) { return real_sphere_harmonic(l, m, x); };
  return f;
}

inline TestFunction make_constant(double c) {
  TestFunction f;
  f.compact = false;
  f.eval = [c](const Vec&) { return c; };
  return f;
}

inline TestFunction combine(const std::vector<std::pair<double, TestFunction>>& terms) {
  TestFunction f;
  f.compact = true;
  for (const auto& [a, g] : terms) {
    (void)a;
    if (!g.compact) f.compact = false;
    for (const auto& b : g.support) f.support.push_back(b);
  }
  auto terms_copy = terms;
  f.eval = [terms_copy](const Vec& x) {
    double s = 0.0;
    for (const auto& [a, g] : terms_copy) s += a * g.eval(x);
    return s;
  };
  return f;
}

// f composed with a linear ambient map: x -> f(g x).  Supports transform accordingly
// only for orthogonal g; for general g callers must supply boxes themselves, so the
// support list is carried through g^{-1} applied to ball centers with radii scaled by
// the operator norm of g^{-1} (conservative).
inline TestFunction precompose(const TestFunction& f, const Mat& g) {
  TestFunction h;
  h.compact = f.compact;
  const Mat ginv = g.inverse();
  const double gain = ginv.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).singularValues()(0);
  for (const auto& b : f.support) h.support.push_back({ginv * b.center, gain * b.radius});
  auto ev = f.eval;
  const Mat gc = g;
  h.eval = [ev, gc](const Vec& x) { return ev(gc * x); };
  return h;
}

}  // namespace horokit
