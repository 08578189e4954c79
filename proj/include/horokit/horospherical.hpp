#pragma once

// The horospherical Cauchy transform (Radon-Cauchy restricted to isotropic sections),
// the inversion operator L_p, the explicit inversion formulas on hyperbolic space
// X_{1,n-1}+ and on the sphere S^{n-1}, sphere horosphere classification, and the
// circle-action harmonic decomposition on S^2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "horokit/canonical.hpp"
#include "horokit/parallel.hpp"
#include "horokit/pvline.hpp"
#include "horokit/quadrature.hpp"
#include "horokit/radon.hpp"
#include "horokit/testfunc.hpp"
#include "horokit/types.hpp"

namespace horokit {

struct HorosphericalValue {
  std::vector<TransformValue> stack;  // d^k/dp^k Hf for k = 0..n-2
};

// L_p applied to a derivative stack: ((n-2)/p) d^{n-3} + 2 d^{n-2}.
inline cplx apply_Lp(const HorosphericalValue& hv, int n, cplx p) {
  if (static_cast<int>(hv.stack.size()) < n - 1)
    throw input_error("apply_Lp: stack must hold derivatives up to order n-2");
  return ((n - 2.0) / p) * hv.stack[n - 3].value + 2.0 * hv.stack[n - 2].value;
}

// ---------------------------------------------------------------------------
// Sphere horosphere classification (section scaled to p = 1)
// ---------------------------------------------------------------------------

enum class SphereHoroClass { interior, boundary, exterior };

struct SphereHorosphereClass {
  SphereHoroClass cls;
  double delta = 0.0;  // Delta(xi) = Delta(eta) of the p-normalized section
  Vec real_point;      // the unique real point (boundary class only)
};

inline SphereHorosphereClass classify_sphere_horosphere(const Section& s, double tol = 1e-9) {
  if (s.Q.q != 0) throw input_error("classify_sphere_horosphere: sphere sections only");
  if (!s.is_horosphere()) throw input_error("classify_sphere_horosphere: zeta must be isotropic");
  SphereHorosphereClass out;
  if (std::abs(s.p) <= tol * s.zeta.norm()) {
    // plane through the origin: always meets the sphere in real points
    out.cls = SphereHoroClass::exterior;
    out.delta = std::numeric_limits<double>::infinity();
    return out;
  }
  const CVec zn = s.zeta / s.p;
  const Vec xi = zn.real();
  out.delta = s.Q.quad_form(xi);
  if (out.delta > 1.0 + tol) {
    out.cls = SphereHoroClass::exterior;
  } else if (out.delta >= 1.0 - tol) {
    out.cls = SphereHoroClass::boundary;
    out.real_point = xi / std::sqrt(out.delta);
  } else {
    out.cls = SphereHoroClass::interior;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Horospherical transform: isotropy-checked Radon-Cauchy with derivative stack
// ---------------------------------------------------------------------------

inline HorosphericalValue horo_transform(const TestFunction& f, const Section& s,
                                         const RadonOptions& opt = {}) {
  if (!s.is_horosphere(1e-8))
    throw input_error("horo_transform: section is not a horosphere (quad(zeta) != 0)");
  const int n = s.Q.n();
  HorosphericalValue hv;
  if (s.Q.q == 0) {
    const auto cls = classify_sphere_horosphere(s);
    if (cls.cls == SphereHoroClass::exterior)
      throw numerical_error("horo_transform: sphere section has real intersections");
    if (cls.cls == SphereHoroClass::interior) {
      for (int k = 0; k <= n - 2; ++k) hv.stack.push_back(radon_cauchy_dp(f, s, k, opt));
      return hv;
    }
    // boundary: regularize p -> p (1 + eps') and extrapolate
    const std::vector<double> ladder = {2e-2, 1e-2, 5e-3, 2.5e-3};
    for (int k = 0; k <= n - 2; ++k) {
      std::vector<cplx> vals;
      for (double e : ladder) {
        Section se(s.Q, s.zeta, s.p * (1.0 + e));
        vals.push_back(radon_cauchy_dp(f, se, k, opt).value);
      }
      TransformValue tv;
      tv.value = richardson_halving(vals);
      std::vector<cplx> shorter(vals.begin(), vals.end() - 1);
      tv.error_estimate = std::abs(tv.value - richardson_halving(shorter));
      tv.regularization = {"eps-extrapolation", ladder};
      hv.stack.push_back(tv);
    }
    return hv;
  }
  if (s.Q.p == 1) {
    for (int k = 0; k <= n - 2; ++k) hv.stack.push_back(radon_cauchy_dp(f, s, k, opt));
    return hv;
  }
  throw unsupported_error("horo_transform: use pseudo-hyperbolic forward_transforms for X_{2,n-2}");
}

// ---------------------------------------------------------------------------
// Inversion on X_{1,2}+:  f(x) = (n-1)/(2(2 pi i)^{n-1}) int L_p Hf |_{p=1} [x,eta,d eta]
// ---------------------------------------------------------------------------

struct InvertOptions {
  int nalpha = 96;
  int nouter = 96;
  int npan = 40;
  bool error_estimate = false;
  // sphere-specific
  int nphi = 96;
  int nrad_graded = 40;
  int nrad_tail = 24;
  std::vector<double> eps_ladder = {2e-2, 1e-2, 5e-3, 2.5e-3};
};

namespace detail {

inline cplx invert_hyperbolic_once(const TestFunction& f, const Vec& x, const InvertOptions& opt) {
  const QuadraticSpace Q(1, 2);
  const Mat g = frame_at(Q, x);
  const TestFunction h = precompose(f, g);
  // integration windows from the original (tight) support balls mapped through g^{-1};
  // the balls carried by precompose are inflated by the operator norm of g^{-1} and
  // would spread the quadrature resolution over a mostly-zero box
  const std::vector<Vec> cloud = transported_support_cloud(f, Mat(g.inverse()), +1.0);
  if (cloud.empty()) return 0.0;
  const double p = 1.0;

  const cplx tot = parallel_sum<cplx>(opt.nalpha, [&](int ia) {
    const double al = 2.0 * kPi * ia / opt.nalpha;
    const double ca = std::cos(al), sa = std::sin(al);
    Vec axis(2), perp(2);
    axis << ca, sa;
    perp << -sa, ca;
    const auto [vlo, vhi] = cloud_range(cloud, perp);
    const auto [slo, shi] = cloud_range(cloud, axis);
    const Rule1D outer = gauss_legendre(opt.nouter, vlo, vhi);
    cplx Hf = 0.0, dHf = 0.0;
    for (int i = 0; i < opt.nouter; ++i) {
      const double v = outer.nodes[i];
      auto point = [&](double s) {
        Vec u(3);
        const double y1 = s * ca - v * sa, y2 = s * sa + v * ca;
        u << std::sqrt(1.0 + y1 * y1 + y2 * y2), y1, y2;
        return u;
      };
      auto F = [&](double s) -> cplx {
        const Vec u = point(s);
        return h(u) * 0.5 / u[0];
      };
      auto T = [&](double s) { return point(s)[0] - s - p; };
      auto Tp = [&](double s) { return s / point(s)[0] - 1.0; };
      Hf += outer.weights[i] * pv_line_m(F, T, Tp, slo, shi, 1, opt.npan);
      dHf += outer.weights[i] * pv_line_m(F, T, Tp, slo, shi, 2, opt.npan);
    }
    // bracket [x0, eta, eta'] = 1 on the horospherical circle
    return (2.0 * kPi / opt.nalpha) * (Hf / p + 2.0 * dHf);
  });
  return 2.0 / (2.0 * std::pow(2.0 * kPi * kI, 2)) * tot;
}

struct SpherePolarGrid {
  std::vector<double> theta, phi, wtheta, wphi;  // tensor nodes; wtheta includes sin(th)/2
};

inline SpherePolarGrid sphere_polar_grid(const InvertOptions& opt) {
  SpherePolarGrid gridp;
  // graded radial nodes th = t^2 near the pole, Gauss tail beyond
  const double split = 0.7;
  const Rule1D gl1 = gauss_legendre(opt.nrad_graded, 0.0, std::sqrt(split));
  for (int i = 0; i < opt.nrad_graded; ++i) {
    const double t = gl1.nodes[i];
    gridp.theta.push_back(t * t);
    gridp.wtheta.push_back(2.0 * t * gl1.weights[i] * std::sin(t * t) / 2.0);
  }
  const Rule1D gl2 = gauss_legendre(opt.nrad_tail, split, kPi);
  for (int i = 0; i < opt.nrad_tail; ++i) {
    gridp.theta.push_back(gl2.nodes[i]);
    gridp.wtheta.push_back(gl2.weights[i] * std::sin(gl2.nodes[i]) / 2.0);
  }
  // Keep nphi nearly coprime with nalpha: the cycle denominator has a ridge along
  // phi = alpha +- pi/2, and when nalpha | nphi every alpha node sees that ridge at the
  // same offset relative to the phi grid, so the phi-quadrature error never averages
  // out over alpha.  A large gcd collapses the set of distinct offsets; cap it.
  // (stay a multiple of 4: with the half-spacing offset that centers the ridge between
  // nodes at the quarter-turn positions; nphi = 2 mod 4 would put it on a node)
  int nphi = (opt.nphi + 3) / 4 * 4;
  while (std::gcd(nphi, opt.nalpha) > 8) nphi += 4;
  for (int j = 0; j < nphi; ++j) {
    gridp.phi.push_back(2.0 * kPi * (j + 0.5) / nphi);
    gridp.wphi.push_back(2.0 * kPi / nphi);
  }
  return gridp;
}

// Inversion sum over the horospherical cycle at the pole e3 with denominator
// e^{i th_rot} <x0 + i eta, u> - p; th_rot = 0, p = 1+eps' for the inversion proper,
// th_rot on a Fourier grid with p = rho > 1 for the circle action.
inline cplx sphere_cycle_sum(const std::vector<double>& fvals, const SpherePolarGrid& gridp,
                             cplx phase, cplx p, const InvertOptions& opt) {
  const int nth = static_cast<int>(gridp.theta.size());
  const int nph = static_cast<int>(gridp.phi.size());
  return parallel_sum<cplx>(opt.nalpha, [&](int ia) {
    const double al = 2.0 * kPi * ia / opt.nalpha;
    const double ca = std::cos(al), sa = std::sin(al);
    cplx Hf = 0.0, dHf = 0.0;
    for (int i = 0; i < nth; ++i) {
      const double st = std::sin(gridp.theta[i]), ct = std::cos(gridp.theta[i]);
      for (int j = 0; j < nph; ++j) {
        const double fv = fvals[static_cast<size_t>(i) * nph + j];
        if (fv == 0.0) continue;
        const double u1 = st * std::cos(gridp.phi[j]);
        const double u2 = st * std::sin(gridp.phi[j]);
        const cplx pair = ct + kI * (ca * u1 + sa * u2);  // <x0 + i eta, u>, x0 = e3
        const cplx K = phase * pair - p;
        const double w = gridp.wtheta[i] * gridp.wphi[j];
        Hf += w * fv / K;
        dHf += w * fv / (K * K);
      }
    }
    return (2.0 * kPi / opt.nalpha) * (Hf / p + 2.0 * dHf);
  });
}

}  // namespace detail

inline TransformValue invert_hyperbolic(const TestFunction& f, const Vec& x,
                                        const InvertOptions& opt = {}) {
  TransformValue out;
  out.value = detail::invert_hyperbolic_once(f, x, opt);
  out.regularization = {"pv-delta", {}};
  if (opt.error_estimate) {
    InvertOptions fine = opt;
    fine.nalpha = opt.nalpha * 3 / 2;
    fine.nouter = opt.nouter * 3 / 2;
    const cplx v2 = detail::invert_hyperbolic_once(f, x, fine);
    out.error_estimate = std::abs(v2 - out.value);
    out.value = v2;
  }
  return out;
}

inline TransformValue invert_sphere(const TestFunction& f, const Vec& x,
                                    const InvertOptions& opt = {}) {
  if (x.size() != 3) throw unsupported_error("invert_sphere: S^2 only");
  Vec pole = Vec::Zero(3);
  pole[2] = 1.0;
  const Mat R = rotation_taking(x, pole);  // R x = e3
  const TestFunction h = precompose(f, R.transpose());
  const detail::SpherePolarGrid gridp = detail::sphere_polar_grid(opt);
  const int nph = static_cast<int>(gridp.phi.size());
  std::vector<double> fvals(gridp.theta.size() * gridp.phi.size());
  for (size_t i = 0; i < gridp.theta.size(); ++i)
    for (int j = 0; j < nph; ++j) {
      Vec u(3);
      const double st = std::sin(gridp.theta[i]);
      u << st * std::cos(gridp.phi[j]), st * std::sin(gridp.phi[j]), std::cos(gridp.theta[i]);
      fvals[i * nph + j] = h(u);
    }
  std::vector<cplx> vals;
  for (double e : opt.eps_ladder)
    vals.push_back(detail::sphere_cycle_sum(fvals, gridp, cplx(1.0, 0.0), 1.0 + e, opt));
  TransformValue out;
  const cplx pref = 2.0 / (2.0 * std::pow(2.0 * kPi, 2));
  out.value = pref * richardson_halving(vals);
  std::vector<cplx> shorter(vals.begin(), vals.end() - 1);
  out.error_estimate = std::abs(out.value - pref * richardson_halving(shorter));
  out.regularization = {"eps-extrapolation", opt.eps_ladder};
  return out;
}

// Degree-l component of f at x via the circle action zeta -> e^{i th} zeta: the
// inversion sum at real p = rho > 1 is analytic, equal to
// sum_l f_l(x) e^{i l th} rho^{-(l+2)}; a Fourier transform in th followed by the
// rho^{l+2} rescale extracts the harmonic component (mode-to-degree map frozen as +l).
struct CircleActionOptions {
  InvertOptions invert;
  double rho = 1.25;
  int nmodes = 16;

  CircleActionOptions() {
    // the analytic (rho > 1) cycle sum needs finer grids than the inversion ladder to
    // keep cross-degree leakage below 1e-6
    invert.nalpha = 96;
    invert.nphi = 192;
    invert.nrad_graded = 80;
    invert.nrad_tail = 48;
  }
};

// Values of the (analytic) inversion sum under the circle action zeta -> e^{i th} zeta
// on a uniform Fourier grid in th; shared by all degree projections at (f, x).
inline std::vector<cplx> circle_action_modes(const TestFunction& f, const Vec& x,
                                             const CircleActionOptions& opt = {}) {
  if (x.size() != 3) throw unsupported_error("circle_action_modes: S^2 only");
  if (opt.rho <= 1.0) throw input_error("circle_action_modes: rho > 1 required");
  Vec pole = Vec::Zero(3);
  pole[2] = 1.0;
  const Mat R = rotation_taking(x, pole);
  const TestFunction h = precompose(f, R.transpose());
  const detail::SpherePolarGrid gridp = detail::sphere_polar_grid(opt.invert);
  const int nph = static_cast<int>(gridp.phi.size());
  std::vector<double> fvals(gridp.theta.size() * gridp.phi.size());
  for (size_t i = 0; i < gridp.theta.size(); ++i)
    for (int j = 0; j < nph; ++j) {
      Vec u(3);
      const double st = std::sin(gridp.theta[i]);
      u << st * std::cos(gridp.phi[j]), st * std::sin(gridp.phi[j]), std::cos(gridp.theta[i]);
      fvals[i * nph + j] = h(u);
    }
  const cplx pref = 2.0 / (2.0 * std::pow(2.0 * kPi, 2));
  std::vector<cplx> modes(opt.nmodes);
  for (int j = 0; j < opt.nmodes; ++j) {
    const double th = 2.0 * kPi * j / opt.nmodes;
    modes[j] =
        pref * detail::sphere_cycle_sum(fvals, gridp, std::exp(kI * th), opt.rho, opt.invert);
  }
  return modes;
}

// Degree-l component from precomputed Fourier-grid values: DFT bin l rescaled by
// rho^{l+2} (the sum equals sum_l f_l(x) e^{i l th} rho^{-(l+2)}).
inline double circle_action_project_modes(const std::vector<cplx>& modes, int degree, double rho) {
  if (degree < 0) throw input_error("circle_action_project_modes: degree >= 0");
  const int nm = static_cast<int>(modes.size());
  cplx mode = 0.0;
  for (int j = 0; j < nm; ++j) {
    const double th = 2.0 * kPi * j / nm;
    mode += modes[j] * std::exp(-kI * static_cast<double>(degree) * th) / static_cast<double>(nm);
  }
  return (mode * std::pow(rho, degree + 2)).real();
}

inline double circle_action_projection(const TestFunction& f, int degree, const Vec& x,
                                       const CircleActionOptions& opt = {}) {
  return circle_action_project_modes(circle_action_modes(f, x, opt), degree, opt.rho);
}

}  // namespace horokit
