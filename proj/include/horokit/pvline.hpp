#pragma once

// Principal-value line integration for Cauchy kernels of order m:
//
//   int_a^b F(s) / (T(s) - i0)^m ds
//
// with T real, smooth, and transverse (T' != 0) at its zeros.  m=1 is handled by pole
// subtraction plus the i*pi delta layer; higher orders reduce recursively through
// integration by parts.  A separate routine handles complex shifts T - i*eps with
// eps > 0 by adaptively graded panels (no distributional layer needed).

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "horokit/quadrature.hpp"
#include "horokit/types.hpp"

namespace horokit {

using RealFn = std::function<double(double)>;
using CplxFn = std::function<cplx(double)>;

// Simple transverse roots of T on [a,b] by sign-scan plus bisection.
inline std::vector<double> find_roots(const RealFn& T, double a, double b, int nscan = 240) {
  std::vector<double> roots;
  double prev_s = a, prev_v = T(a);
  for (int i = 1; i < nscan; ++i) {
    const double s = a + (b - a) * i / (nscan - 1.0);
    const double v = T(s);
    if (prev_v == 0.0) {
      roots.push_back(prev_s);
    } else if (prev_v * v < 0.0) {
      double lo = prev_s, hi = s, flo = prev_v;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = T(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_s = s;
    prev_v = v;
  }
  if (prev_v == 0.0) roots.push_back(prev_s);
  return roots;
}

// int_a^b F/(T - i0) ds for simple transverse roots.
inline cplx pv_line_m1(const CplxFn& F, const RealFn& T, const RealFn& Tp, double a, double b,
                       int npan = 48) {
  const std::vector<double> roots = find_roots(T, a, b);
  std::vector<cplx> C(roots.size());
  cplx val = 0.0;
  for (size_t k = 0; k < roots.size(); ++k) {
    const double r = roots[k];
    const double tp = Tp(r);
    if (std::abs(tp) < 1e-12) throw numerical_error("pv_line_m1: non-transverse root");
    C[k] = F(r) / tp;
    val += kI * kPi * F(r) / std::abs(tp);
    val += C[k] * std::log(std::abs((b - r) / (a - r)));
  }
  std::vector<double> pts = roots;
  pts.push_back(a);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  auto resid = [&](double s) {
    cplx out = F(s) / T(s);
    for (size_t k = 0; k < roots.size(); ++k) out -= C[k] / (s - roots[k]);
    return out;
  };
  for (size_t seg = 0; seg + 1 < pts.size(); ++seg) {
    const Rule1D rule = gauss_legendre(npan, pts[seg], pts[seg + 1]);
    for (int i = 0; i < npan; ++i) val += rule.weights[i] * resid(rule.nodes[i]);
  }
  return val;
}

// int_a^b F/(T - i0)^m ds, m >= 1, by recursive integration by parts:
//   int F T^{-m} = [-F / ((m-1) T' T^{m-1})]_a^b + (1/(m-1)) int (F/T')' T^{-(m-1)}.
// Derivatives of F/T' are taken by central differences with step h.
inline cplx pv_line_m(const CplxFn& F, const RealFn& T, const RealFn& Tp, double a, double b, int m,
                      int npan = 48, double h = 1e-5) {
  if (m < 1) throw input_error("pv_line_m: m >= 1");
  if (m == 1) return pv_line_m1(F, T, Tp, a, b, npan);
  auto G = [&](double s) { return F(s) / Tp(s); };
  auto Gp = [&, h](double s) { return (G(s + h) - G(s - h)) / (2.0 * h); };
  const double k = m - 1.0;
  auto Fnext = [&](double s) { return Gp(s) / k; };
  cplx val = pv_line_m(Fnext, T, Tp, a, b, m - 1, npan, h);
  const double Ta = T(a), Tb = T(b);
  if (Ta == 0.0 || Tb == 0.0) throw numerical_error("pv_line_m: root at interval endpoint");
  val += -F(b) / (k * Tp(b) * std::pow(Tb, m - 1)) + F(a) / (k * Tp(a) * std::pow(Ta, m - 1));
  return val;
}

// int_a^b F(s) / K(s)^m ds where K = Tre(s) + i*Tim(s) with Tim bounded away from 0
// near the zeros of Tre (complex shift).  Panels are refined geometrically toward the
// zeros of Tre down to the local scale |Tim| so the Lorentzian peak is resolved.
inline cplx line_integral_shifted(const CplxFn& F, const RealFn& Tre, const RealFn& Tim, double a,
                                  double b, int m, int per_panel = 12, int max_levels = 40) {
  const std::vector<double> roots = find_roots(Tre, a, b);
  std::vector<double> cuts = {a, b};
  for (double r : roots) {
    const double scale = std::max(std::abs(Tim(r)) / 6.0, 1e-7);
    // geometric cuts approaching r from both sides
    for (int side = -1; side <= 1; side += 2) {
      double w = (b - a);
      for (int lvl = 0; lvl < max_levels && w > scale; ++lvl) {
        w *= 0.5;
        const double c = r + side * w;
        if (c > a && c < b) cuts.push_back(c);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) { return std::abs(x - y) < 1e-14 * (b - a); }),
             cuts.end());
  cplx val = 0.0;
  for (size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const Rule1D rule = gauss_legendre(per_panel, cuts[seg], cuts[seg + 1]);
    for (int i = 0; i < per_panel; ++i) {
      const double s = rule.nodes[i];
      const cplx K(Tre(s), Tim(s));
      val += rule.weights[i] * F(s) / std::pow(K, m);
    }
  }
  return val;
}

// Plain Gauss-Legendre line integral of F/(T)^m with no singular structure.
inline cplx plain_line(const CplxFn& F, const CplxFn& T, double a, double b, int m, int npan = 48) {
  const Rule1D rule = gauss_legendre(npan, a, b);
  cplx val = 0.0;
  for (int i = 0; i < npan; ++i)
    val += rule.weights[i] * F(rule.nodes[i]) / std::pow(T(rule.nodes[i]), m);
  return val;
}

}  // namespace horokit
