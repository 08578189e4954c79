#pragma once

// The Cauchy-Radon transform f^(xi, p) = int_X f(x) / (<xi,x> - p - i0) omega and its
// p-derivatives, with two regularization routes:
//
//  * pv-delta (default for real sections): the chart integral is sliced into lines on
//    which the denominator is transverse; each line is handled by pole subtraction +
//    the i*pi delta layer (see pvline.hpp).  On X_{1,2} the slicing direction is chosen
//    by first moving the covector to SO(1,2) canonical form; on S^{n-1} by rotating it
//    to the chart pole.
//  * eps-extrapolation: evaluate at a ladder eps_k = eps0 * 2^{-k} truncated at the
//    grid-resolution floor, then Richardson-extrapolate.
//
// Complex sections whose denominator has no real zeros are integrated directly (eps=0).

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "horokit/canonical.hpp"
#include "horokit/charts.hpp"
#include "horokit/parallel.hpp"
#include "horokit/pvline.hpp"
#include "horokit/quadratic.hpp"
#include "horokit/testfunc.hpp"
#include "horokit/types.hpp"

namespace horokit {

struct Section {
  QuadraticSpace Q;
  CVec zeta;
  cplx p;

  Section(QuadraticSpace q, CVec z, cplx pp) : Q(q), zeta(std::move(z)), p(pp) {
    if (zeta.size() != Q.n()) throw input_error("Section: zeta dimension mismatch");
    if (zeta.norm() == 0.0) throw input_error("Section: zeta must be nonzero");
  }
  Section(QuadraticSpace q, const Vec& xi, double pp) : Section(q, to_cvec(xi), cplx(pp)) {}

  Vec xi() const { return zeta.real(); }
  Vec eta() const { return zeta.imag(); }
  bool is_real(double tol = 1e-12) const {
    return eta().norm() <= tol * zeta.norm() && std::abs(p.imag()) <= tol * (1.0 + std::abs(p));
  }
  bool is_horosphere(double tol = 1e-10) const { return Q.is_isotropic(zeta, tol); }
};

struct Regularization {
  std::string mode;                 // "pv-delta" | "eps-extrapolation" | "plain"
  std::vector<double> eps_ladder;   // empty unless eps-extrapolation
};

struct TransformValue {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;
  Regularization regularization;
};

inline cplx cauchy_kernel(cplx t, double eps, int m) {
  if (eps < 0) throw input_error("cauchy_kernel: eps >= 0");
  const cplx d = t - kI * eps;
  if (std::abs(d) == 0.0) throw numerical_error("cauchy_kernel: singular at t=0, eps=0");
  return std::pow(d, -m);
}

// ---------------------------------------------------------------------------
// pv-delta on X_{1,2}
// ---------------------------------------------------------------------------

struct PvX12Options {
  int nouter = 80;               // outer transverse Gauss nodes (or polar rays)
  int npan = 48;                 // Gauss nodes per pv panel
  std::vector<double> sheets = {+1.0};
  // Frozen canonicalization + box, for finite-difference studies in (xi, p) where the
  // integration domain must not move with the differenced section.
  std::optional<CanonicalX12> frozen;
  double frozen_box = 0.0;
};

// Half-width of the chart box (in canonical coordinates) covering the transported
// support of f on the given sheet.
inline double transported_support_box(const TestFunction& f, const Mat& g, double sheet) {
  if (!f.compact || f.support.empty())
    throw input_error("pv transform requires a compactly supported test function");
  double mx = 0.0;
  bool any = false;
  for (const auto& ball : f.support) {
    if (sheet * ball.center[0] < -ball.radius) continue;  // ball cannot touch this sheet
    any = true;
    const double cy1 = ball.center[1], cy2 = ball.center[2];
    for (int k = 0; k <= 64; ++k) {
      const double t = 2.0 * kPi * k / 64.0;
      const double y1 = cy1 + ball.radius * std::cos(t);
      const double y2 = cy2 + ball.radius * std::sin(t);
      Vec u(3);
      u << sheet * std::sqrt(1.0 + y1 * y1 + y2 * y2), y1, y2;
      const Vec w = g * u;
      mx = std::max({mx, std::abs(w[1]), std::abs(w[2])});
    }
  }
  if (!any) return 0.0;  // support misses the sheet entirely
  return mx * 1.15 + 0.3;
}

// Sampled boundary of the chart-coordinate (y) support footprint of f after the ambient
// map u -> g u, on the given sheet of X_{1,2}.  Projection ranges of the support onto
// any direction in the y-plane can be read off this cloud (extremes of a linear
// functional over a compact region are attained on its boundary).
inline std::vector<Vec> transported_support_cloud(const TestFunction& f, const Mat& g,
                                                  double sheet) {
  if (!f.compact || f.support.empty())
    throw input_error("transported_support_cloud requires a compactly supported test function");
  std::vector<Vec> cloud;
  for (const auto& ball : f.support) {
    if (sheet * ball.center[0] < -ball.radius) continue;
    for (int k = 0; k < 64; ++k) {
      const double t = 2.0 * kPi * k / 64.0;
      const double y1 = ball.center[1] + ball.radius * std::cos(t);
      const double y2 = ball.center[2] + ball.radius * std::sin(t);
      Vec u(3);
      u << sheet * std::sqrt(1.0 + y1 * y1 + y2 * y2), y1, y2;
      const Vec w = g * u;
      Vec y(2);
      y << w[1], w[2];
      cloud.push_back(y);
    }
  }
  return cloud;
}

// [min, max] of cloud . dir, padded by 5% of the span plus `pad`.
inline std::pair<double, double> cloud_range(const std::vector<Vec>& cloud, const Vec& dir,
                                             double pad = 0.1) {
  double lo = 1e300, hi = -1e300;
  for (const Vec& y : cloud) {
    const double s = y.dot(dir);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double m = 0.05 * (hi - lo) + pad;
  return {lo - m, hi + m};
}

// int over the chosen sheets of f(u) / (<xi,u> - p - i0)^m omega on X_{1,2}.
inline cplx radon_pv_x12(const TestFunction& f, const Vec& xi, double p, int m,
                         const PvX12Options& opt = {}) {
  if (xi.size() != 3) throw input_error("radon_pv_x12: n=3 only");
  const CanonicalX12 canon = opt.frozen ? *opt.frozen : canonicalize_x12(xi);
  const Mat ginv = canon.g.inverse();
  const Vec xic = canon.g * xi;  // exactly canonical unless frozen

  cplx total = 0.0;
  for (double sheet : opt.sheets) {
    const double box = (opt.frozen && opt.frozen_box > 0.0)
                           ? opt.frozen_box
                           : transported_support_box(f, canon.g, sheet);
    if (box == 0.0) continue;
    auto emb = [sheet](double y1, double y2) {
      Vec u(3);
      u << sheet * std::sqrt(1.0 + y1 * y1 + y2 * y2), y1, y2;
      return u;
    };
    auto Fc = [&](double y1, double y2) -> double {
      const Vec u = emb(y1, y2);
      return f(ginv * u) * 0.5 / std::abs(u[0]);
    };
    auto pairing_c = [&](double y1, double y2) {
      const double x1 = sheet * std::sqrt(1.0 + y1 * y1 + y2 * y2);
      return xic[0] * x1 - xic[1] * y1 - xic[2] * y2;
    };

    if (canon.kind == SectionKind::spacelike || canon.kind == SectionKind::isotropic) {
      // slice along y1; dT/dy1 = xic0 * y1/x1 - xic1 is bounded away from 0 when
      // |xic1| > |xic0| (spacelike) or |xic1| = |xic0| (isotropic, strict inside).
      const Rule1D outer = gauss_legendre(opt.nouter, -box, box);
      total += parallel_sum<cplx>(opt.nouter, [&](int i) {
        const double v = outer.nodes[i];
        auto F = [&](double s) -> cplx { return Fc(s, v); };
        auto T = [&](double s) { return pairing_c(s, v) - p; };
        auto Tp = [&](double s) {
          const double x1 = sheet * std::sqrt(1.0 + s * s + v * v);
          return xic[0] * s / x1 - xic[1];
        };
        return outer.weights[i] * pv_line_m(F, T, Tp, -box, box, m, opt.npan);
      });
    } else {
      // timelike: polar slicing along the radius.
      const int nb = opt.nouter;
      total += parallel_sum<cplx>(nb, [&](int i) {
        const double be = 2.0 * kPi * i / nb;
        const double cb = std::cos(be), sb = std::sin(be);
        auto F = [&](double r) -> cplx { return Fc(r * cb, r * sb) * r; };
        auto T = [&](double r) { return pairing_c(r * cb, r * sb) - p; };
        auto Tp = [&](double r) {
          const double x1 = sheet * std::sqrt(1.0 + r * r);
          return xic[0] * r / x1 - (xic[1] * cb + xic[2] * sb);
        };
        cplx line;
        if (m == 1) {
          line = pv_line_m1(F, T, Tp, 0.0, box, opt.npan);
        } else {
          // T'(0) = 0 at the polar origin (for canonical xic); integrate plainly on
          // [0, delta] (no roots there) and by parts on [delta, box].
          const std::vector<double> roots = find_roots([&](double r) { return T(r); }, 0.0, box);
          double delta = 0.25 * box;
          for (double r : roots) delta = std::min(delta, 0.5 * r);
          if (delta < 1e-6 * box) throw numerical_error("radon_pv_x12: root at polar origin");
          line = plain_line(F, [&](double r) { return cplx(T(r)); }, 0.0, delta, m, opt.npan);
          line += pv_line_m(F, T, Tp, delta, box, m, opt.npan);
        }
        return (2.0 * kPi / nb) * line;
      });
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// pv-delta on S^{n-1} (real sections): rotate xi to the chart pole so the denominator
// depends on the polar angle only.
// ---------------------------------------------------------------------------

struct PvSphereOptions {
  int nphi = 160;
  int npan = 48;
  double collar = 1e-8;
};

inline cplx radon_pv_sphere(const TestFunction& f, const Vec& xi, double p, int m,
                            const PvSphereOptions& opt = {}) {
  const int n = static_cast<int>(xi.size());
  if (n != 3) throw unsupported_error("radon_pv_sphere: S^2 only");
  const double b = xi.norm();
  Vec pole = Vec::Zero(3);
  pole[2] = 1.0;
  const Mat R = rotation_taking(xi, pole);  // R xi/|xi| = e3
  const Mat Rt = R.transpose();
  if (std::abs(std::abs(p) - b) < 1e-10 * b)
    throw numerical_error("radon_pv_sphere: tangent section (non-transverse)");
  const double a = opt.collar, bb = kPi - opt.collar;
  return parallel_sum<cplx>(opt.nphi, [&](int i) {
    const double phi = 2.0 * kPi * i / opt.nphi;
    auto F = [&](double th) -> cplx {
      Vec u(3);
      u << std::sin(th) * std::cos(phi), std::sin(th) * std::sin(phi), std::cos(th);
      return f(Rt * u) * std::sin(th) / 2.0;
    };
    auto T = [&](double th) { return b * std::cos(th) - p; };
    auto Tp = [&](double th) { return -b * std::sin(th); };
    return (2.0 * kPi / opt.nphi) * pv_line_m(F, T, Tp, a, bb, m, opt.npan);
  });
}

// ---------------------------------------------------------------------------
// eps-extrapolation and plain quadrature on a chart grid
// ---------------------------------------------------------------------------

struct EpsOptions {
  double eps0 = 0.1;
  int K = 6;                     // nominal ladder length (eps0 * 2^-k, k=0..K-1)
  double floor_factor = 4.0;     // keep rungs with eps >= floor_factor * grid spacing
  int min_rungs = 3;
};

inline cplx grid_kernel_integral(const QuadratureGrid& grid, const TestFunction& f,
                                 const CVec& zeta, cplx p, double eps, int m) {
  const QuadraticSpace& Q = grid.chart->space();
  const int chunk = 1024;
  const int nchunks = static_cast<int>((grid.points.size() + chunk - 1) / chunk);
  return parallel_sum<cplx>(nchunks, [&](int c) {
    cplx s = 0.0;
    const size_t beg = static_cast<size_t>(c) * chunk;
    const size_t end = std::min(grid.points.size(), beg + chunk);
    for (size_t i = beg; i < end; ++i) {
      const double fv = f(grid.points[i]);
      if (fv == 0.0) continue;
      const cplx t = Q.pairing(zeta, to_cvec(grid.points[i])) - p;
      s += grid.weights[i] * fv * cauchy_kernel(t, eps, m);
    }
    return s;
  });
}

inline double grid_min_denominator(const QuadratureGrid& grid, const CVec& zeta, cplx p) {
  const QuadraticSpace& Q = grid.chart->space();
  double mn = 1e300;
  for (const auto& x : grid.points)
    mn = std::min(mn, std::abs(Q.pairing(zeta, to_cvec(x)) - p));
  return mn;
}

// Typical chart grid spacing (max over axes of box-width / count).
inline double grid_spacing(const Chart& chart, const std::vector<int>& counts) {
  const Vec lo = chart.box_lo(), hi = chart.box_hi();
  double h = 0.0;
  for (int a = 0; a < chart.dim(); ++a) h = std::max(h, (hi[a] - lo[a]) / counts[a]);
  return h;
}

inline TransformValue radon_eps(const std::vector<const Chart*>& charts,
                                const std::vector<int>& counts, const TestFunction& f,
                                const CVec& zeta, cplx p, int m, const EpsOptions& opt = {}) {
  double spacing = 0.0;
  for (const Chart* c : charts) spacing = std::max(spacing, grid_spacing(*c, counts));
  const double floor = opt.floor_factor * spacing;
  std::vector<double> ladder;
  for (int k = 0; k < opt.K; ++k) {
    const double e = opt.eps0 * std::pow(2.0, -k);
    if (e >= floor || static_cast<int>(ladder.size()) < opt.min_rungs) ladder.push_back(e);
  }
  if (static_cast<int>(ladder.size()) < opt.min_rungs)
    throw numerical_error("radon_eps: ladder unresolved at this grid resolution");
  std::vector<QuadratureGrid> grids;
  for (const Chart* c : charts) grids.push_back(QuadratureGrid::build(*c, counts));
  std::vector<cplx> vals;
  for (double e : ladder) {
    cplx v = 0.0;
    for (const auto& g : grids) v += grid_kernel_integral(g, f, zeta, p, e, m);
    vals.push_back(v);
  }
  TransformValue out;
  out.value = richardson_halving(vals);
  std::vector<cplx> shorter(vals.begin(), vals.end() - 1);
  out.error_estimate = std::abs(out.value - richardson_halving(shorter));
  out.regularization = {"eps-extrapolation", ladder};
  return out;
}

inline TransformValue radon_plain(const std::vector<const Chart*>& charts,
                                  const std::vector<int>& counts, const TestFunction& f,
                                  const CVec& zeta, cplx p, int m) {
  cplx coarse = 0.0, fine = 0.0;
  for (const Chart* c : charts) {
    const QuadratureGrid g = QuadratureGrid::build(*c, counts);
    if (grid_min_denominator(g, zeta, p) < 1e-10 * zeta.norm())
      throw numerical_error("radon_plain: denominator (near-)vanishes on the grid; use a regularized mode");
    std::vector<int> c2 = counts;
    for (auto& k : c2) k = k * 3 / 2;
    const QuadratureGrid g2 = QuadratureGrid::build(*c, c2);
    coarse += grid_kernel_integral(g, f, zeta, p, 0.0, m);
    fine += grid_kernel_integral(g2, f, zeta, p, 0.0, m);
  }
  TransformValue out;
  out.value = fine;
  out.error_estimate = std::abs(fine - coarse);
  out.regularization = {"plain", {}};
  return out;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

struct RadonOptions {
  std::string mode = "auto";  // auto | pv | eps | plain
  PvX12Options pv_x12;
  PvSphereOptions pv_sphere;
  EpsOptions eps;
  std::vector<int> grid_counts;  // eps/plain chart grid (defaults per space)
  double box_x12 = 2.0;          // graph-chart half box for eps/plain on X_{1,2}
  bool error_estimate = false;   // pv modes: refine once for an error estimate
};

inline cplx radon_value_once(const TestFunction& f, const Section& s, int m,
                             const RadonOptions& opt) {
  const int n = s.Q.n();
  const bool sphere = (s.Q.q == 0);
  std::string mode = opt.mode;
  if (mode == "auto") mode = s.is_real() ? "pv" : "plain";

  if (mode == "pv") {
    if (!s.is_real()) throw input_error("radon_cauchy: pv mode requires a real section");
    if (sphere && n == 3) return radon_pv_sphere(f, s.xi(), s.p.real(), m, opt.pv_sphere);
    if (s.Q.p == 1 && n == 3) return radon_pv_x12(f, s.xi(), s.p.real(), m, opt.pv_x12);
    throw unsupported_error("radon_cauchy: pv mode implemented for X_{1,2} and S^2");
  }
  throw input_error("radon_value_once: pv only");
}

inline TransformValue radon_cauchy(const TestFunction& f, const Section& s, int m,
                                   const RadonOptions& opt = {}) {
  const int n = s.Q.n();
  const bool sphere = (s.Q.q == 0);
  std::string mode = opt.mode;
  if (mode == "auto") mode = s.is_real() ? "pv" : "plain";

  if (mode == "pv") {
    TransformValue out;
    out.value = radon_value_once(f, s, m, opt);
    out.regularization = {"pv-delta", {}};
    if (opt.error_estimate) {
      RadonOptions fine = opt;
      fine.pv_x12.nouter = opt.pv_x12.nouter * 3 / 2;
      fine.pv_x12.npan = opt.pv_x12.npan * 3 / 2;
      fine.pv_sphere.nphi = opt.pv_sphere.nphi * 3 / 2;
      fine.pv_sphere.npan = opt.pv_sphere.npan * 3 / 2;
      const cplx v2 = radon_value_once(f, s, m, fine);
      out.error_estimate = std::abs(v2 - out.value);
      out.value = v2;
    }
    return out;
  }

  // chart set for eps / plain
  std::vector<std::unique_ptr<Chart>> owned;
  std::vector<const Chart*> charts;
  std::vector<int> counts = opt.grid_counts;
  if (sphere) {
    owned.push_back(std::make_unique<SphereChart>(n));
    if (counts.empty()) counts = (n == 3) ? std::vector<int>{160, 320} : std::vector<int>{48, 48, 96};
  } else if (s.Q.p == 1) {
    owned.push_back(std::make_unique<HyperbolicGraphChart>(n, +1.0, opt.box_x12));
    owned.push_back(std::make_unique<HyperbolicGraphChart>(n, -1.0, opt.box_x12));
    if (counts.empty()) counts = (n == 3) ? std::vector<int>{240, 240} : std::vector<int>{72, 72, 72};
  } else if (s.Q.p == 2) {
    owned.push_back(std::make_unique<PseudoProductChart>(n));
    if (counts.empty()) counts = std::vector<int>(n - 1, 48);
  } else {
    throw unsupported_error("radon_cauchy: unsupported signature");
  }
  for (const auto& c : owned) charts.push_back(c.get());

  if (mode == "plain") return radon_plain(charts, counts, f, s.zeta, s.p, m);
  if (mode == "eps") return radon_eps(charts, counts, f, s.zeta, s.p, m, opt.eps);
  throw input_error("radon_cauchy: unknown mode '" + mode + "'");
}

// k-th derivative in p, computed analytically under the integral: d^k/dp^k of the
// order-m kernel raises the order to m+k and multiplies by (m)_k = (m+k-1)!/(m-1)!.
inline TransformValue radon_cauchy_dp(const TestFunction& f, const Section& s, int k,
                                      const RadonOptions& opt = {}) {
  if (k < 0) throw input_error("radon_cauchy_dp: k >= 0");
  double coeff = 1.0;
  for (int j = 1; j <= k; ++j) coeff *= j;  // m=1 base kernel: coefficient k!
  TransformValue v = radon_cauchy(f, s, k + 1, opt);
  v.value *= coeff;
  v.error_estimate *= coeff;
  return v;
}

// ---------------------------------------------------------------------------
// Ultrahyperbolic residual on X_{1,2}:  { box_{1,2}(d/dxi) - d^2/dp^2 } f^ at (xi,p),
// central differences with a frozen canonical frame and integration box so the
// integration domain does not move across the difference stencil.
// ---------------------------------------------------------------------------

struct UltraResult {
  std::vector<double> steps;
  std::vector<double> residuals;
  double order = 0.0;       // mean log2 decay rate between consecutive steps
  double noise_floor = 0.0; // quadrature-noise estimate of the finest residual
};

inline UltraResult ultrahyperbolic_residual_x12(const TestFunction& f, const Vec& xi, double p,
                                                const std::vector<double>& steps,
                                                PvX12Options opt = {}) {
  if (xi.size() != 3) throw input_error("ultrahyperbolic_residual_x12: n=3 only");
  CanonicalX12 canon = canonicalize_x12(xi);
  double box = 0.0;
  for (double sheet : opt.sheets) box = std::max(box, transported_support_box(f, canon.g, sheet));
  opt.frozen = canon;
  opt.frozen_box = box;

  auto fhat = [&](const Vec& x, double pp, const PvX12Options& o) {
    return radon_pv_x12(f, x, pp, 1, o);
  };
  auto residual_at = [&](double h, const PvX12Options& o) {
    const cplx f0 = fhat(xi, p, o);
    cplx res = 0.0;
    for (int j = 0; j < 3; ++j) {
      Vec e = Vec::Zero(3);
      e[j] = h;
      const double sgn = (j == 0) ? 1.0 : -1.0;
      res += sgn * (fhat(xi + e, p, o) - 2.0 * f0 + fhat(xi - e, p, o)) / (h * h);
    }
    res -= (fhat(xi, p + h, o) - 2.0 * f0 + fhat(xi, p - h, o)) / (h * h);
    return res;
  };

  UltraResult out;
  out.steps = steps;
  for (double h : steps) out.residuals.push_back(std::abs(residual_at(h, opt)));
  double acc = 0.0;
  for (size_t i = 0; i + 1 < steps.size(); ++i)
    acc += std::log2(out.residuals[i] / out.residuals[i + 1]) /
           std::log2(steps[i] / steps[i + 1]);
  out.order = acc / std::max<size_t>(1, steps.size() - 1);
  PvX12Options fine = opt;
  fine.nouter = opt.nouter * 3 / 2;
  fine.npan = opt.npan * 3 / 2;
  const double res_fine = std::abs(residual_at(steps.back(), fine));
  out.noise_floor = std::abs(res_fine - out.residuals.back());
  return out;
}

}  // namespace horokit
