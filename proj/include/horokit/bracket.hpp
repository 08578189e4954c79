#pragma once

// Bracket determinant calculus [a_1, ..., a_n]: determinants whose trailing columns are
// repeated differentials.  The symbol [..., dxi^{k}] evaluated on tangent vectors
// v_1..v_k equals k! * det(fixed columns | v_1..v_k); the k! carries the antisymmetrized
// multiplicity of the repeated column.  When such a bracket is integrated over (or
// evaluated on) a k-cell as a differential form, the multiplicity divides back out, so
// the form value on a frame is det(fixed | frame).

#include <functional>
#include <vector>

#include "horokit/quadratic.hpp"
#include "horokit/types.hpp"

namespace horokit {

struct BracketSpec {
  std::vector<CVec> fixed;
  int k = 0;  // number of repeated differential slots
};

inline double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

inline cplx bracket_eval(const BracketSpec& spec, const std::vector<CVec>& tangents) {
  if (static_cast<int>(tangents.size()) != spec.k) throw input_error("bracket_eval: tangent count != k");
  const int n = static_cast<int>(spec.fixed.size()) + spec.k;
  if (n == 0) throw input_error("bracket_eval: empty spec");
  for (const auto& c : spec.fixed)
    if (c.size() != n) throw input_error("bracket_eval: fixed column dimension mismatch");
  for (const auto& c : tangents)
    if (c.size() != n) throw input_error("bracket_eval: tangent dimension mismatch");
  CMat m(n, n);
  int col = 0;
  for (const auto& c : spec.fixed) m.col(col++) = c;
  for (const auto& c : tangents) m.col(col++) = c;
  return factorial(spec.k) * m.partialPivLu().determinant();
}

// Value of the bracket as a differential form on a frame (multiplicity divided out).
inline cplx bracket_form_value(const BracketSpec& spec, const std::vector<CVec>& tangents) {
  return bracket_eval(spec, tangents) / factorial(spec.k);
}

inline CVec to_cvec(const Vec& v) { return v.cast<cplx>(); }

// Residual of the determinant-differential identity ("Lemma 1")
//
//   d[a(xi), xi, dxi^{n-2}] = -(1/(n-1)) (div a)(xi) [xi, dxi^{n-1}],
//
// which holds exactly for vector fields a homogeneous of degree -(n-1) (this is the
// form in which the identity is used: a(xi) = (u+x)/<xi,u-x>^{n-1}).  The brackets
// carry the multiplicity convention of bracket_eval ([.., dxi^k] = k! det); on plain
// determinant form values the factor (n-2)!/(n-1)! cancels the 1/(n-1) and the
// identity reads  d det(a, xi, .) = -(div a) det(xi, .).  Evaluated on the (n-1)-cell
// spanned by `frame` at xi0; d is computed by central differences with step h, so the
// residual of an exact identity decays as O(h^2).
inline double lemma1_residual(const std::function<Vec(const Vec&)>& a, const Vec& xi0,
                              const std::vector<Vec>& frame, double h) {
  const int n = static_cast<int>(xi0.size());
  if (n < 3) throw unsupported_error("lemma1_residual: requires n >= 3");
  if (static_cast<int>(frame.size()) != n - 1) throw input_error("lemma1_residual: need n-1 frame vectors");
  if (h <= 0) throw input_error("lemma1_residual: step must be positive");

  // alpha(w_1..w_{n-2}; xi) = det(a(xi), xi, w_1..w_{n-2})  (form value)
  auto alpha = [&](const Vec& xi, const std::vector<int>& idx) -> double {
    Mat m(n, n);
    m.col(0) = a(xi);
    m.col(1) = xi;
    for (size_t i = 0; i < idx.size(); ++i) m.col(2 + static_cast<int>(i)) = frame[idx[i]];
    return m.partialPivLu().determinant();
  };

  // d(alpha)(v_1..v_{n-1}) = sum_i (-1)^(i-1) D_{v_i} alpha(..omit v_i..)
  double dval = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    std::vector<int> rest;
    for (int j = 0; j < n - 1; ++j)
      if (j != i) rest.push_back(j);
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    const Vec xp = xi0 + h * frame[i];
    const Vec xm = xi0 - h * frame[i];
    dval += sign * (alpha(xp, rest) - alpha(xm, rest)) / (2.0 * h);
  }

  const double hd = 1e-6 * std::max(1.0, xi0.norm());
  double div = 0.0;
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = hd;
    div += (a(xi0 + e)[j] - a(xi0 - e)[j]) / (2.0 * hd);
  }

  Mat m(n, n);
  m.col(0) = xi0;
  for (int i = 0; i < n - 1; ++i) m.col(1 + i) = frame[i];
  const double rhs = m.partialPivLu().determinant();

  return std::abs(dval + div * rhs);
}

}  // namespace horokit
