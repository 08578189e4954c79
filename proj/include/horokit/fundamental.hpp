#pragma once

// The fundamental form kappa_x[f] and its integral over cycles of sections through x:
//
//   I = int_{X x gamma} f(u) [x+u, zeta, dzeta^{n-2}] / (<zeta,(u-x)> - i eps)^{n-1} omega
//
// with the reconstruction contract I -> c f(x), c = 2 (2 pi i)^{n-1} / (n-1)!.
// The integral is reduced to the base point e_1 through the cycle's frame g
// (u = g v leaves kernel, bracket, and measure invariant), where the section family
// has the explicit closed form of cycles.hpp and the inner integral can be sliced so
// the denominator is transverse on every line (principal value at eps = 0), or is
// resolved by graded panels when a complex shift eps' > 0 is applied (sphere family).

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "horokit/cycles.hpp"
#include "horokit/parallel.hpp"
#include "horokit/pvline.hpp"
#include "horokit/quadrature.hpp"
#include "horokit/radon.hpp"
#include "horokit/testfunc.hpp"
#include "horokit/types.hpp"

namespace horokit {

inline cplx prop2_constant(int n) {
  return 2.0 * std::pow(2.0 * kPi * kI, n - 1) / factorial(n - 1);
}

// Nearest unimodular convention factor among {1, i, -1, -i}.
inline cplx snap_unimodular(cplx ratio) {
  const cplx cands[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  cplx best = cands[0];
  double bd = 1e300;
  for (const cplx& c : cands) {
    const double d = std::abs(ratio / std::abs(ratio) - c);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  return best;
}

struct FundamentalOptions {
  int ncycle = 48;      // cycle nodes per angle (n=3: alpha count; n=4: {ncycle/4, ncycle/3})
  int nouter = 72;      // transverse Gauss nodes in the inner integral
  int npan = 40;        // Gauss nodes per pv panel
  int nphi = 128;       // azimuthal nodes of the inner sphere integral
  double eps_shift = 0.0;  // sphere family: evaluate at p + i*eps_shift
  double collar = 1e-8;
  // shifted sphere sections: azimuthal panels around the quasi-singular point,
  // Gauss nodes per panel, and graded-panel depth of the polar line integral
  int nseg_shift = 48;
  int nseg_nodes = 10;
  int shift_depth = 12;
};

namespace detail {

// Affine representation of the bracket B(u) = [x0+u, zeta, tangents] = b0 + bu . u.
struct AffineBracket {
  cplx b0;
  CVec bu;
};

inline AffineBracket affine_bracket(const Vec& x0, const CycleSection& sec) {
  const int n = static_cast<int>(x0.size());
  auto det_with_first = [&](const CVec& first) {
    CMat m(n, n);
    m.col(0) = first;
    m.col(1) = sec.zeta;
    for (size_t k = 0; k < sec.dzeta.size(); ++k) m.col(2 + static_cast<int>(k)) = sec.dzeta[k];
    return m.partialPivLu().determinant();
  };
  AffineBracket ab;
  ab.b0 = det_with_first(to_cvec(x0));
  ab.bu = CVec(n);
  for (int j = 0; j < n; ++j) {
    CVec e = CVec::Zero(n);
    e[j] = 1.0;
    ab.bu[j] = det_with_first(e);
  }
  return ab;
}

// Orthonormal basis of the euclidean complement of unit vector lam in R^{n-1}.
inline std::vector<Vec> complement_basis(const Vec& lam) {
  const int d = static_cast<int>(lam.size());
  std::vector<Vec> out;
  Mat proj = Mat::Identity(d, d) - lam * lam.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(proj);
  for (int k = 0; k < d; ++k)
    if (es.eigenvalues()[k] > 0.5) out.push_back(es.eigenvectors().col(k));
  if (static_cast<int>(out.size()) != d - 1)
    throw numerical_error("complement_basis: degenerate projection");
  return out;
}

// Geometric panel cuts on [a,b] refined toward `center` down to `scale`, on top of a
// uniform base partition.
inline std::vector<double> refined_cuts(double a, double b, double center, double scale,
                                        int base_panels) {
  std::vector<double> cuts;
  for (int i = 0; i <= base_panels; ++i) cuts.push_back(a + (b - a) * i / base_panels);
  double w = b - a;
  for (int lvl = 0; lvl < 60 && w > scale; ++lvl) {
    w *= 0.5;
    for (int side = -1; side <= 1; side += 2) {
      const double c = center + side * w;
      if (c > a && c < b) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) { return std::abs(x - y) < 1e-13 * (b - a); }),
             cuts.end());
  return cuts;
}

// ---- X_{1,n-1}: principal-value inner integral, lines along lambda ----
inline cplx fundamental_hyperbolic(const TestFunction& f, const Cycle& cyc,
                                   const FundamentalOptions& opt) {
  const int n = cyc.Q.n();
  const int m = n - 1;
  const TestFunction h = precompose(f, cyc.g);
  Vec x0 = Vec::Zero(n);
  x0[0] = 1.0;

  // cycle parameter grid
  std::vector<Vec> thetas;
  std::vector<double> cweights;
  if (n == 3) {
    for (int i = 0; i < opt.ncycle; ++i) {
      Vec th(1);
      th << 2.0 * kPi * i / opt.ncycle;
      thetas.push_back(th);
      cweights.push_back(2.0 * kPi / opt.ncycle);
    }
  } else {
    const int nt = std::max(4, opt.ncycle / 4), na = std::max(8, opt.ncycle / 3);
    const Rule1D tr = gauss_legendre(nt, 0.0, kPi);
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < na; ++j) {
        Vec th(2);
        th << tr.nodes[i], 2.0 * kPi * j / na;
        thetas.push_back(th);
        cweights.push_back(tr.weights[i] * 2.0 * kPi / na);
      }
  }

  // per-sheet transported support, from the original (tight) support balls mapped
  // through g^{-1} (the balls carried by precompose are conservatively inflated)
  double boxes[2] = {0.0, 0.0};
  std::vector<Vec> clouds[2];
  if (n == 3) {
    const Mat ginv = cyc.g.inverse();
    clouds[0] = transported_support_cloud(f, ginv, +1.0);
    clouds[1] = transported_support_cloud(f, ginv, -1.0);
    for (int si = 0; si < 2; ++si)
      for (const Vec& y : clouds[si]) boxes[si] = std::max(boxes[si], y.norm() + 0.3);
  } else {
    // conservative euclidean bound from the support balls
    for (const auto& ball : h.support) {
      const double r = ball.center.tail(n - 1).norm() + ball.radius;
      const int idx = ball.center[0] + ball.radius >= 0 ? 0 : 1;
      boxes[idx] = std::max(boxes[idx], r * 1.15 + 0.3);
      if (std::abs(ball.center[0]) <= ball.radius)
        boxes[1 - idx] = std::max(boxes[1 - idx], r * 1.15 + 0.3);
    }
  }

  return parallel_sum<cplx>(static_cast<int>(thetas.size()), [&](int ci) {
    // base-point section: g^{-1} zeta has the closed form (rho, lambda)
    Vec lambda;
    std::vector<Vec> dl;
    param_sphere(n, thetas[ci], lambda, dl);
    CycleSection base;
    base.zeta = CVec::Zero(n);
    base.zeta[0] = cyc.rho;
    base.zeta.tail(n - 1) = to_cvec(lambda);
    base.p = cyc.rho;
    for (const auto& d : dl) {
      CVec dz = CVec::Zero(n);
      dz.tail(n - 1) = to_cvec(d);
      base.dzeta.push_back(dz);
    }
    const AffineBracket ab = affine_bracket(x0, base);
    const std::vector<Vec> wbasis = complement_basis(lambda);

    cplx acc = 0.0;
    for (int si = 0; si < 2; ++si) {
      const double sheet = si == 0 ? +1.0 : -1.0;
      if (boxes[si] == 0.0 && clouds[si].empty()) continue;
      const double L = 1.5 * boxes[si] + 0.2;

      // support windows along the slicing direction lambda and its complement
      double s_lo = -L, s_hi = L, w_lo = -L, w_hi = L;
      if (n == 3 && !clouds[si].empty()) {
        std::tie(s_lo, s_hi) = cloud_range(clouds[si], lambda);
        std::tie(w_lo, w_hi) = cloud_range(clouds[si], wbasis[0]);
      }

      auto eval_line = [&](const Vec& w) {
        auto point = [&](double s) {
          Vec y = s * lambda;
          for (size_t k = 0; k < wbasis.size(); ++k) y += w[k] * wbasis[k];
          Vec u(n);
          u[0] = sheet * std::sqrt(1.0 + y.squaredNorm());
          u.tail(n - 1) = y;
          return u;
        };
        auto F = [&](double s) -> cplx {
          const Vec u = point(s);
          const double fv = h(u);
          if (fv == 0.0) return 0.0;
          const cplx B = ab.b0 + (ab.bu.array() * to_cvec(u).array()).sum();
          // graph-chart density: det(x | J) = 1/x1, so omega = du / (|x1| (n-1)!)
          return fv * B / (std::abs(u[0]) * factorial(n - 1));
        };
        auto T = [&](double s) {
          const Vec u = point(s);
          return cyc.rho * u[0] - s - cyc.rho;
        };
        auto Tp = [&](double s) {
          const Vec u = point(s);
          return cyc.rho * s / u[0] - 1.0;
        };
        return pv_line_m(F, T, Tp, s_lo, s_hi, m, opt.npan);
      };

      if (n == 3) {
        const Rule1D outer = gauss_legendre(opt.nouter, w_lo, w_hi);
        for (int i = 0; i < opt.nouter; ++i) {
          Vec w(1);
          w << outer.nodes[i];
          acc += outer.weights[i] * eval_line(w);
        }
      } else {
        const int nw = std::max(8, opt.nouter / 3);
        const Rule1D outer = gauss_legendre(nw, -L, L);
        for (int i = 0; i < nw; ++i)
          for (int j = 0; j < nw; ++j) {
            Vec w(2);
            w << outer.nodes[i], outer.nodes[j];
            acc += outer.weights[i] * outer.weights[j] * eval_line(w);
          }
      }
    }
    return cweights[ci] * acc;
  });
}

// ---- S^{n-1}: pv (real sections) or shifted panels (complex sections) ----
inline cplx fundamental_sphere(const TestFunction& f, const Cycle& cyc,
                               const FundamentalOptions& opt) {
  const int n = cyc.Q.n();
  const int m = n - 1;
  const TestFunction h = precompose(f, cyc.g);
  Vec x0 = Vec::Zero(n);
  x0[0] = 1.0;
  const bool real_sections = (cyc.rho == 0.0 && opt.eps_shift == 0.0);
  if (!real_sections && n != 3)
    throw unsupported_error("fundamental_sphere: shifted cycles implemented for S^2");

  std::vector<Vec> thetas;
  std::vector<double> cweights;
  if (n == 3) {
    for (int i = 0; i < opt.ncycle; ++i) {
      Vec th(1);
      th << 2.0 * kPi * i / opt.ncycle;
      thetas.push_back(th);
      cweights.push_back(2.0 * kPi / opt.ncycle);
    }
  } else {
    const int nt = std::max(4, opt.ncycle / 4), na = std::max(8, opt.ncycle / 3);
    const Rule1D tr = gauss_legendre(nt, 0.0, kPi);
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < na; ++j) {
        Vec th(2);
        th << tr.nodes[i], 2.0 * kPi * j / na;
        thetas.push_back(th);
        cweights.push_back(tr.weights[i] * 2.0 * kPi / na);
      }
  }

  return parallel_sum<cplx>(static_cast<int>(thetas.size()), [&](int ci) {
    Vec lambda;
    std::vector<Vec> dl;
    param_sphere(n, thetas[ci], lambda, dl);
    CycleSection base;
    base.zeta = CVec::Zero(n);
    base.zeta[0] = kI * cyc.rho;
    base.zeta.tail(n - 1) = to_cvec(lambda);
    base.p = kI * cyc.rho;
    for (const auto& d : dl) {
      CVec dz = CVec::Zero(n);
      dz.tail(n - 1) = to_cvec(d);
      base.dzeta.push_back(dz);
    }
    const AffineBracket ab = affine_bracket(x0, base);

    // rotate Re(zeta) = (0, lambda) to the chart pole
    Vec rezeta = Vec::Zero(n);
    rezeta.tail(n - 1) = lambda;
    Vec pole = Vec::Zero(n);
    if (n == 3)
      pole[2] = 1.0;  // chart (sin t cos a, sin t sin a, cos t)
    else
      pole[0] = 1.0;  // chart (cos t, ...)
    const Mat R = rotation_taking(rezeta, pole);
    const Mat Rt = R.transpose();

    auto value_at = [&](const Vec& u) -> cplx {
      const double fv = h(u);
      if (fv == 0.0 && h.compact) return 0.0;
      return fv * (ab.b0 + (ab.bu.array() * to_cvec(u).array()).sum());
    };

    cplx inner = 0.0;
    if (n == 3) {
      auto emb = [&](double th, double ph) {
        Vec u(3);
        u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        return u;
      };
      if (real_sections) {
        for (int i = 0; i < opt.nphi; ++i) {
          const double ph = 2.0 * kPi * i / opt.nphi;
          auto F = [&](double th) -> cplx {
            const Vec u = Rt * emb(th, ph);
            return value_at(u) * std::sin(th) / 2.0;
          };
          auto T = [&](double th) { return std::cos(th); };
          auto Tp = [&](double th) { return -std::sin(th); };
          inner += (2.0 * kPi / opt.nphi) *
                   pv_line_m(F, T, Tp, opt.collar, kPi - opt.collar, m, opt.npan);
        }
      } else {
        // complex sections: T = cos th + i Phi(u), Phi = rho((R^T u)_1 - 1) - eps' <= -eps'
        const Vec ux0 = R * x0;  // image of the base point (the quasi-singular point)
        const double ph0 = std::atan2(ux0[1], ux0[0]);
        const double wphi =
            std::max(std::sqrt(opt.eps_shift / std::max(cyc.rho, opt.eps_shift)) / 6.0, 1e-4);
        std::vector<double> cuts = refined_cuts(ph0 - kPi, ph0 + kPi, ph0, wphi, opt.nseg_shift);
        for (size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
          const Rule1D rule = gauss_legendre(opt.nseg_nodes, cuts[seg], cuts[seg + 1]);
          for (int i = 0; i < opt.nseg_nodes; ++i) {
            const double ph = rule.nodes[i];
            auto F = [&](double th) -> cplx {
              const Vec u = Rt * emb(th, ph);
              return value_at(u) * std::sin(th) / 2.0;
            };
            auto Tre = [&](double th) { return std::cos(th); };
            auto Tim = [&](double th) {
              const Vec u = Rt * emb(th, ph);
              return cyc.rho * (u[0] - 1.0) - opt.eps_shift;
            };
            inner += rule.weights[i] * line_integral_shifted(F, Tre, Tim, opt.collar,
                                                             kPi - opt.collar, m, opt.shift_depth);
          }
        }
      }
    } else {
      // S^3, real sections: chart pole e1, density sin^2 t sin s / 3!
      const int n2 = std::max(12, opt.nphi / 8);
      const Rule1D r2 = gauss_legendre(n2, opt.collar, kPi - opt.collar);
      for (int i2 = 0; i2 < n2; ++i2)
        for (int i3 = 0; i3 < n2; ++i3) {
          const double t2 = r2.nodes[i2];
          const double t3 = 2.0 * kPi * i3 / n2;
          auto F = [&](double th) -> cplx {
            Vec u(4);
            u << std::cos(th), std::sin(th) * std::cos(t2), std::sin(th) * std::sin(t2) * std::cos(t3),
                std::sin(th) * std::sin(t2) * std::sin(t3);
            const Vec uu = Rt * u;
            return value_at(uu) * std::sin(th) * std::sin(th) * std::sin(t2) / 6.0;
          };
          auto T = [&](double th) { return std::cos(th); };
          auto Tp = [&](double th) { return -std::sin(th); };
          inner += r2.weights[i2] * (2.0 * kPi / n2) *
                   pv_line_m(F, T, Tp, opt.collar, kPi - opt.collar, m, opt.npan);
        }
    }
    return cweights[ci] * inner;
  });
}

}  // namespace detail

inline TransformValue fundamental_form_integral(const TestFunction& f, const Cycle& cyc,
                                                const FundamentalOptions& opt = {}) {
  TransformValue out;
  if (cyc.kind == SpaceKind::hyperbolic) {
    out.value = detail::fundamental_hyperbolic(f, cyc, opt);
    out.regularization = {"pv-delta", {}};
  } else if (cyc.kind == SpaceKind::sphere) {
    out.value = detail::fundamental_sphere(f, cyc, opt);
    out.regularization = {(cyc.rho == 0.0 && opt.eps_shift == 0.0)
                              ? std::string("pv-delta")
                              : std::string("eps-shift"),
                          {opt.eps_shift}};
  } else {
    throw unsupported_error("fundamental_form_integral: X_{2,n-2} reconstruction is out of scope");
  }
  return out;
}

struct CycleIndependence {
  std::vector<double> rhos;
  std::vector<cplx> values;
  double max_deviation = 0.0;
  cplx reference{0.0, 0.0};
};

inline CycleIndependence cycle_independence_check(const TestFunction& f, const QuadraticSpace& Q,
                                                  SpaceKind kind, const Vec& x,
                                                  const std::vector<double>& rhos,
                                                  const FundamentalOptions& opt = {}) {
  CycleIndependence out;
  out.rhos = rhos;
  for (double r : rhos) {
    const Cycle c = deformed_cycle(Q, kind, x, r);
    out.values.push_back(fundamental_form_integral(f, c, opt).value);
  }
  out.reference = out.values.front();
  for (size_t i = 0; i < out.values.size(); ++i)
    for (size_t j = i + 1; j < out.values.size(); ++j)
      out.max_deviation = std::max(out.max_deviation, std::abs(out.values[i] - out.values[j]));
  return out;
}

}  // namespace horokit
