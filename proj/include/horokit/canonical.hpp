#pragma once

// Group-element canonicalization:
//  - SO(1,2) canonical forms of real covectors on X_{1,2} (timelike / spacelike /
//    isotropic), used by the principal-value slicing of the Radon-Cauchy transform;
//  - euclidean rotations taking a direction to a chart pole on S^{n-1};
//  - form-orthonormal frames g with g e_1 = x for base-point reduction on any X_{p,q}.

#include <cmath>

#include "horokit/quadratic.hpp"
#include "horokit/types.hpp"

namespace horokit {

enum class SectionKind { timelike, spacelike, isotropic };

struct CanonicalX12 {
  Mat g;          // g in SO(1,2), orthochronous; g * xi is canonical
  SectionKind kind;
  Vec xic;        // canonical form: (s,0,0), (0,s,0), or (a,+-a,0)
};

inline CanonicalX12 canonicalize_x12(const Vec& xi) {
  if (xi.size() != 3) throw input_error("canonicalize_x12: n=3 only");
  const double b = std::hypot(xi[1], xi[2]);
  Mat R = Mat::Identity(3, 3);
  if (b > 1e-14) {
    const double c = xi[1] / b, s = xi[2] / b;
    R << 1, 0, 0, 0, c, s, 0, -s, c;  // spatial rotation: (xi0, b, 0)
  }
  const double a = xi[0];
  const double Q = a * a - b * b;
  const double scale = a * a + b * b;
  Mat B = Mat::Identity(3, 3);
  SectionKind kind;
  if (Q > 1e-12 * scale) {
    kind = SectionKind::timelike;
    if (std::abs(a) > std::abs(b)) {
      const double th = std::atanh(b / a);
      const double ch = std::cosh(th), sh = std::sinh(th);
      B << ch, -sh, 0, -sh, ch, 0, 0, 0, 1;
    }
  } else if (Q < -1e-12 * scale) {
    kind = SectionKind::spacelike;
    const double th = std::atanh(a / b);
    const double ch = std::cosh(th), sh = std::sinh(th);
    B << ch, -sh, 0, -sh, ch, 0, 0, 0, 1;
  } else {
    kind = SectionKind::isotropic;
  }
  CanonicalX12 out;
  out.g = B * R;
  out.kind = kind;
  out.xic = out.g * xi;
  return out;
}

// Rotation R in SO(n) with R * (a/|a|) = b/|b| (euclidean), via the rotation in the
// plane spanned by a, b.
inline Mat rotation_taking(const Vec& a_in, const Vec& b_in) {
  const int n = static_cast<int>(a_in.size());
  if (b_in.size() != n) throw input_error("rotation_taking: dimension mismatch");
  const Vec a = a_in.normalized();
  const Vec b = b_in.normalized();
  const double c = a.dot(b);
  Vec w = b - c * a;
  const double wn = w.norm();
  if (wn < 1e-14) {
    if (c > 0) return Mat::Identity(n, n);
    // antipodal: rotate by pi in any plane containing a
    Vec u = Vec::Zero(n);
    u[(std::abs(a[0]) < 0.9) ? 0 : 1] = 1.0;
    u -= a.dot(u) * a;
    u.normalize();
    return Mat::Identity(n, n) - 2.0 * a * a.transpose() - 2.0 * u * u.transpose();
  }
  w /= wn;
  // R = I + (c-1)(aa^T + ww^T) + s(wa^T - aw^T), s = sin(theta) = wn
  Mat R = Mat::Identity(n, n);
  R += (c - 1.0) * (a * a.transpose() + w * w.transpose());
  R += wn * (w * a.transpose() - a * w.transpose());
  return R;
}

// Form-orthonormal frame: g with columns u_j satisfying <u_i,u_j> = delta_ij * d_j
// (so g^T J g = J, J = diag(d)), g e_1 = x, det g = +1.  Requires quad_form(x) = 1.
// For X_{1,n-1} with x on the positive sheet the result is orthochronous.
inline Mat frame_at(const QuadraticSpace& Q, const Vec& x) {
  const int n = Q.n();
  if (x.size() != n) throw input_error("frame_at: dimension mismatch");
  if (std::abs(Q.quad_form(x) - 1.0) > 1e-9) throw input_error("frame_at: x must satisfy quad(x)=1");
  std::vector<Vec> plus, minus;
  plus.push_back(x / std::sqrt(Q.quad_form(x)));
  auto project = [&](Vec v) {
    for (const Vec& u : plus) v -= Q.pairing(v, u) * u;
    for (const Vec& u : minus) v += Q.pairing(v, u) * u;
    return v;
  };
  for (int j = 0; j < n && static_cast<int>(plus.size() + minus.size()) < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = 1.0;
    Vec v = project(e);
    const double qv = Q.quad_form(v);
    if (std::abs(qv) < 1e-8 * std::max(1.0, v.squaredNorm())) continue;
    v /= std::sqrt(std::abs(qv));
    if (qv > 0) {
      if (static_cast<int>(plus.size()) < Q.p) plus.push_back(v);
    } else {
      if (static_cast<int>(minus.size()) < Q.q) minus.push_back(v);
    }
  }
  if (static_cast<int>(plus.size()) != Q.p || static_cast<int>(minus.size()) != Q.q)
    throw numerical_error("frame_at: failed to complete a form-orthonormal frame");
  Mat g(n, n);
  for (int j = 0; j < Q.p; ++j) g.col(j) = plus[j];
  for (int j = 0; j < Q.q; ++j) g.col(Q.p + j) = minus[j];
  if (g.determinant() < 0) g.col(n - 1) *= -1.0;
  return g;
}

}  // namespace horokit
