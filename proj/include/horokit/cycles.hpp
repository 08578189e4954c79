#pragma once

// Cycles of hyperplane sections through a point x of X_{p,q}: the geodesic cycle, its
// deformation into the horospherical cycle, and the lambda-independence identity for
// the residue form on the isotropic cone.
//
// All cycles are generated at the base point e_1 and conjugated by a form-orthonormal
// frame g with g e_1 = x.  The parameter domain is the euclidean sphere S^{n-2}
// (a circle for n=3), with sections:
//   hyperbolic X_{1,n-1}:  zeta = (rho, lambda),            p = rho
//   sphere S^{n-1}:        zeta = (i rho, lambda),          p = i rho
//   pseudo X_{2,n-2}:      zeta = (i rho s(lambda), lambda), p = i rho s(lambda),
//                          s = sqrt(box_{1,n-2}(lambda)) (imaginary for negative box)
// At rho=1 all sections are isotropic (horospheres); at rho=0 they pass through the
// origin (geodesic cycle).

#include <cmath>
#include <functional>
#include <vector>

#include "horokit/bracket.hpp"
#include "horokit/canonical.hpp"
#include "horokit/quadratic.hpp"
#include "horokit/types.hpp"

namespace horokit {

enum class SpaceKind { hyperbolic, sphere, pseudo };

struct CycleSection {
  CVec zeta;
  cplx p{0.0, 0.0};
  std::vector<CVec> dzeta;  // derivatives of zeta in the parameter-chart directions
};

// lambda(theta) on the euclidean sphere S^{n-2} in R^{n-1} and its chart tangents.
// n=3: theta=(alpha); n=4: theta=(polar t, azimuth a), lambda=(cos t, sin t cos a, sin t sin a).
inline void param_sphere(int n, const Vec& theta, Vec& lambda, std::vector<Vec>& dlambda) {
  if (n == 3) {
    if (theta.size() != 1) throw input_error("param_sphere: need 1 angle for n=3");
    lambda = Vec(2);
    lambda << std::cos(theta[0]), std::sin(theta[0]);
    dlambda.assign(1, Vec(2));
    dlambda[0] << -std::sin(theta[0]), std::cos(theta[0]);
  } else if (n == 4) {
    if (theta.size() != 2) throw input_error("param_sphere: need 2 angles for n=4");
    const double t = theta[0], a = theta[1];
    lambda = Vec(3);
    lambda << std::cos(t), std::sin(t) * std::cos(a), std::sin(t) * std::sin(a);
    dlambda.assign(2, Vec(3));
    dlambda[0] << -std::sin(t), std::cos(t) * std::cos(a), std::cos(t) * std::sin(a);
    dlambda[1] << 0.0, -std::sin(t) * std::sin(a), std::sin(t) * std::cos(a);
  } else {
    throw unsupported_error("param_sphere: n in {3,4}");
  }
}

struct Cycle {
  QuadraticSpace Q;
  SpaceKind kind;
  Vec x;
  double rho = 0.0;
  Mat g;  // frame with g e_1 = x

  int param_dim() const { return Q.n() - 2; }

  CycleSection section(const Vec& theta) const {
    const int n = Q.n();
    Vec lambda;
    std::vector<Vec> dlambda;
    param_sphere(n, theta, lambda, dlambda);

    CVec z0 = CVec::Zero(n);
    std::vector<CVec> dz0(param_dim(), CVec::Zero(n));
    cplx p0;
    if (kind == SpaceKind::hyperbolic || kind == SpaceKind::sphere) {
      const cplx head = (kind == SpaceKind::hyperbolic) ? cplx(rho, 0.0) : cplx(0.0, rho);
      z0[0] = head;
      z0.tail(n - 1) = to_cvec(lambda);
      p0 = head;
      for (int k = 0; k < param_dim(); ++k) dz0[k].tail(n - 1) = to_cvec(dlambda[k]);
    } else {
      // X_{2,n-2}: head = i*rho*sqrt(box_{1,n-2}(lambda)); the sqrt is taken on the
      // principal branch so negative box gives a real (negative) head.
      QuadraticSpace Qsub(1, n - 2);
      const double s = Qsub.quad_form(lambda);
      const cplx root = std::sqrt(cplx(s, 0.0));
      const cplx head = kI * rho * root;
      z0[0] = head;
      z0.tail(n - 1) = to_cvec(lambda);
      p0 = head;
      for (int k = 0; k < param_dim(); ++k) {
        dz0[k].tail(n - 1) = to_cvec(dlambda[k]);
        if (std::abs(root) > 1e-10) {
          const double ds = 2.0 * Qsub.pairing(lambda, dlambda[k]);
          dz0[k][0] = kI * rho * ds / (2.0 * root);
        }
      }
    }

    CycleSection out;
    out.zeta = g.cast<cplx>() * z0;
    out.p = p0;
    for (const auto& d : dz0) out.dzeta.push_back(g.cast<cplx>() * d);
    return out;
  }
};

inline Cycle deformed_cycle(const QuadraticSpace& Q, SpaceKind kind, const Vec& x, double rho) {
  if (rho < 0.0 || rho > 1.0) throw input_error("deformed_cycle: rho in [0,1]");
  if ((kind == SpaceKind::hyperbolic && Q.p != 1) || (kind == SpaceKind::sphere && Q.q != 0) ||
      (kind == SpaceKind::pseudo && Q.p != 2))
    throw input_error("deformed_cycle: space kind does not match signature");
  Cycle c{Q, kind, x, rho, frame_at(Q, x)};
  return c;
}

inline Cycle geodesic_cycle(const QuadraticSpace& Q, SpaceKind kind, const Vec& x) {
  return deformed_cycle(Q, kind, x, 0.0);
}

// |[l1,zeta,dzeta]/<l1,zeta> - [l2,zeta,dzeta]/<l2,zeta>| on the given tangent frame;
// vanishes identically for isotropic zeta (the residue form on the cone).
inline double lambda_independence_check(const QuadraticSpace& Q, const CVec& zeta,
                                        const std::vector<CVec>& tangents, const CVec& l1,
                                        const CVec& l2) {
  const cplx d1 = Q.pairing(l1, zeta);
  const cplx d2 = Q.pairing(l2, zeta);
  if (std::abs(d1) < 1e-14 || std::abs(d2) < 1e-14)
    throw numerical_error("lambda_independence_check: <lambda,zeta> = 0");
  BracketSpec s1{{l1, zeta}, static_cast<int>(tangents.size())};
  BracketSpec s2{{l2, zeta}, static_cast<int>(tangents.size())};
  const cplx v1 = bracket_form_value(s1, tangents) / d1;
  const cplx v2 = bracket_form_value(s2, tangents) / d2;
  return std::abs(v1 - v2);
}

}  // namespace horokit
