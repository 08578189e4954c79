#pragma once

// Charts on the quadrics X_{p,q}, the invariant measure, and tensor quadrature grids.
//
// The invariant measure omega_{p,q} is realized through the chart density
//   density(u) = |det( embed(u) | jacobian(u) )| / (n-1)!
// i.e. the interior-product form 2 d(quad) _| [dx^{n}] up to the overall normalization
// fixed so that the reconstruction constants of the closed-form inversion formulas come
// out exactly (see tests); the x-column variant (not the delta-weighted displayed sum,
// which is not group invariant) is the one used.

#include <cmath>
#include <functional>
#include <memory>

#include "horokit/bracket.hpp"
#include "horokit/parallel.hpp"
#include "horokit/quadratic.hpp"
#include "horokit/quadrature.hpp"
#include "horokit/types.hpp"

namespace horokit {

class Chart {
 public:
  virtual ~Chart() = default;
  virtual const QuadraticSpace& space() const = 0;
  virtual int dim() const = 0;  // = n-1
  virtual Vec box_lo() const = 0;
  virtual Vec box_hi() const = 0;
  virtual bool axis_periodic(int axis) const { return false; }
  virtual Vec embed(const Vec& u) const = 0;
  virtual Mat jacobian(const Vec& u) const = 0;

  void check_in_box(const Vec& u) const {
    const Vec lo = box_lo(), hi = box_hi();
    for (int i = 0; i < dim(); ++i)
      if (u[i] < lo[i] - 1e-12 || u[i] > hi[i] + 1e-12) throw domain_error("chart: point outside box");
  }

  double measure_density(const Vec& u) const {
    const int n = space().n();
    Mat m(n, n);
    m.col(0) = embed(u);
    m.block(0, 1, n, n - 1) = jacobian(u);
    const double det = m.partialPivLu().determinant();
    return std::abs(det) / factorial(n - 1);
  }
};

// Graph chart for one sheet of X_{1,n-1}: x = (s*sqrt(1+|y|^2), y), s = +-1.
class HyperbolicGraphChart : public Chart {
 public:
  HyperbolicGraphChart(int n, double sheet = 1.0, double half_box = 6.0)
      : Q_(1, n - 1), sheet_(sheet), half_box_(half_box) {
    if (n < 2) throw input_error("HyperbolicGraphChart: n >= 2");
  }
  const QuadraticSpace& space() const override { return Q_; }
  int dim() const override { return Q_.n() - 1; }
  double sheet() const { return sheet_; }
  Vec box_lo() const override { return Vec::Constant(dim(), -half_box_); }
  Vec box_hi() const override { return Vec::Constant(dim(), half_box_); }
  Vec embed(const Vec& u) const override {
    Vec x(Q_.n());
    x[0] = sheet_ * std::sqrt(1.0 + u.squaredNorm());
    x.tail(dim()) = u;
    return x;
  }
  Mat jacobian(const Vec& u) const override {
    const int n = Q_.n();
    Mat j = Mat::Zero(n, n - 1);
    const double x1 = sheet_ * std::sqrt(1.0 + u.squaredNorm());
    for (int k = 0; k < n - 1; ++k) {
      j(0, k) = u[k] / x1;
      j(k + 1, k) = 1.0;
    }
    return j;
  }

 private:
  QuadraticSpace Q_;
  double sheet_;
  double half_box_;
};

// Angular chart for S^{n-1} (n = 3 or 4): polar angles with a small collar excluded at
// the poles where the chart degenerates.
class SphereChart : public Chart {
 public:
  explicit SphereChart(int n, double collar = 1e-8) : Q_(n, 0), collar_(collar) {
    if (n != 3 && n != 4) throw unsupported_error("SphereChart: n in {3,4}");
  }
  const QuadraticSpace& space() const override { return Q_; }
  int dim() const override { return Q_.n() - 1; }
  bool axis_periodic(int axis) const override { return axis == dim() - 1; }
  Vec box_lo() const override {
    Vec lo = Vec::Constant(dim(), collar_);
    lo[dim() - 1] = 0.0;
    return lo;
  }
  Vec box_hi() const override {
    Vec hi = Vec::Constant(dim(), kPi - collar_);
    hi[dim() - 1] = 2.0 * kPi;
    return hi;
  }
  Vec embed(const Vec& u) const override {
    Vec x(Q_.n());
    if (Q_.n() == 3) {
      x << std::sin(u[0]) * std::cos(u[1]), std::sin(u[0]) * std::sin(u[1]), std::cos(u[0]);
    } else {
      x << std::cos(u[0]), std::sin(u[0]) * std::cos(u[1]), std::sin(u[0]) * std::sin(u[1]) * std::cos(u[2]),
          std::sin(u[0]) * std::sin(u[1]) * std::sin(u[2]);
    }
    return x;
  }
  Mat jacobian(const Vec& u) const override {
    const int n = Q_.n();
    Mat j(n, n - 1);
    const double h = 1e-6;
    for (int k = 0; k < n - 1; ++k) {
      Vec up = u, um = u;
      up[k] += h;
      um[k] -= h;
      j.col(k) = (embed(up) - embed(um)) / (2.0 * h);
    }
    return j;
  }
  // Analytic density (exact; the FD jacobian is only a fallback for generic code).
  double density(const Vec& u) const {
    if (Q_.n() == 3) return std::sin(u[0]) / 2.0;
    return std::sin(u[0]) * std::sin(u[0]) * std::sin(u[1]) / 6.0;
  }

 private:
  QuadraticSpace Q_;
  double collar_;
};

// Product chart on X_{2,n-2}: x = (r cos a, r sin a, z), r = sqrt(1+|z|^2).
class PseudoProductChart : public Chart {
 public:
  PseudoProductChart(int n, double z_half_box = 3.0) : Q_(2, n - 2), z_half_box_(z_half_box) {
    if (n < 4) throw input_error("PseudoProductChart: n >= 4");
  }
  const QuadraticSpace& space() const override { return Q_; }
  int dim() const override { return Q_.n() - 1; }
  bool axis_periodic(int axis) const override { return axis == 0; }
  Vec box_lo() const override {
    Vec lo = Vec::Constant(dim(), -z_half_box_);
    lo[0] = 0.0;
    return lo;
  }
  Vec box_hi() const override {
    Vec hi = Vec::Constant(dim(), z_half_box_);
    hi[0] = 2.0 * kPi;
    return hi;
  }
  Vec embed(const Vec& u) const override {
    const int n = Q_.n();
    const Vec z = u.tail(n - 2);
    const double r = std::sqrt(1.0 + z.squaredNorm());
    Vec x(n);
    x[0] = r * std::cos(u[0]);
    x[1] = r * std::sin(u[0]);
    x.tail(n - 2) = z;
    return x;
  }
  Mat jacobian(const Vec& u) const override {
    const int n = Q_.n();
    const Vec z = u.tail(n - 2);
    const double r = std::sqrt(1.0 + z.squaredNorm());
    Mat j = Mat::Zero(n, n - 1);
    j(0, 0) = -r * std::sin(u[0]);
    j(1, 0) = r * std::cos(u[0]);
    for (int k = 0; k < n - 2; ++k) {
      j(0, k + 1) = z[k] * std::cos(u[0]) / r;
      j(1, k + 1) = z[k] * std::sin(u[0]) / r;
      j(k + 2, k + 1) = 1.0;
    }
    return j;
  }

 private:
  QuadraticSpace Q_;
  double z_half_box_;
};

// X_{1,1} hyperbola x = (cosh t, sinh t); used in tests of measure invariance.
class X11Chart : public Chart {
 public:
  explicit X11Chart(double half_box = 4.0) : Q_(1, 1), half_box_(half_box) {}
  const QuadraticSpace& space() const override { return Q_; }
  int dim() const override { return 1; }
  Vec box_lo() const override { return Vec::Constant(1, -half_box_); }
  Vec box_hi() const override { return Vec::Constant(1, half_box_); }
  Vec embed(const Vec& u) const override {
    Vec x(2);
    x << std::cosh(u[0]), std::sinh(u[0]);
    return x;
  }
  Mat jacobian(const Vec& u) const override {
    Mat j(2, 1);
    j << std::sinh(u[0]), std::cosh(u[0]);
    return j;
  }

 private:
  QuadraticSpace Q_;
  double half_box_;
};

// Tensor quadrature grid over a chart box: Gauss-Legendre per axis, uniform on
// periodic axes.  Nodes carry the chart measure density in their weights.
struct QuadratureGrid {
  const Chart* chart = nullptr;
  std::vector<Vec> nodes;       // chart coordinates
  std::vector<Vec> points;      // embedded ambient points
  std::vector<double> weights;  // du weight * measure density

  static QuadratureGrid build(const Chart& chart, const std::vector<int>& counts) {
    if (static_cast<int>(counts.size()) != chart.dim()) throw input_error("QuadratureGrid: counts size != dim");
    const Vec lo = chart.box_lo(), hi = chart.box_hi();
    std::vector<Rule1D> rules;
    for (int a = 0; a < chart.dim(); ++a) {
      if (counts[a] < 1) throw input_error("QuadratureGrid: counts must be positive");
      rules.push_back(chart.axis_periodic(a) ? periodic_uniform(counts[a], lo[a], hi[a])
                                             : gauss_legendre(counts[a], lo[a], hi[a]));
    }
    QuadratureGrid g;
    g.chart = &chart;
    size_t total = 1;
    for (int a = 0; a < chart.dim(); ++a) total *= counts[a];
    g.nodes.reserve(total);
    g.points.reserve(total);
    g.weights.reserve(total);
    std::vector<int> idx(chart.dim(), 0);
    for (size_t flat = 0; flat < total; ++flat) {
      Vec u(chart.dim());
      double w = 1.0;
      size_t rem = flat;
      for (int a = chart.dim() - 1; a >= 0; --a) {
        const int i = static_cast<int>(rem % counts[a]);
        rem /= counts[a];
        u[a] = rules[a].nodes[i];
        w *= rules[a].weights[i];
      }
      g.nodes.push_back(u);
      g.points.push_back(chart.embed(u));
      g.weights.push_back(w * chart.measure_density(u));
    }
    return g;
  }

  // Integral of f(x) against the invariant measure; f takes the ambient point.
  double integrate(const std::function<double(const Vec&)>& f) const {
    const int chunk = 1024;
    const int nchunks = static_cast<int>((nodes.size() + chunk - 1) / chunk);
    return parallel_sum<double>(nchunks, [&](int c) {
      double s = 0.0;
      const size_t beg = static_cast<size_t>(c) * chunk;
      const size_t end = std::min(nodes.size(), beg + chunk);
      for (size_t i = beg; i < end; ++i) s += weights[i] * f(points[i]);
      return s;
    });
  }

  cplx integrate_c(const std::function<cplx(const Vec&)>& f) const {
    const int chunk = 1024;
    const int nchunks = static_cast<int>((nodes.size() + chunk - 1) / chunk);
    return parallel_sum<cplx>(nchunks, [&](int c) {
      cplx s = 0.0;
      const size_t beg = static_cast<size_t>(c) * chunk;
      const size_t end = std::min(nodes.size(), beg + chunk);
      for (size_t i = beg; i < end; ++i) s += weights[i] * f(points[i]);
      return s;
    });
  }
};

// Integral with an error estimate from one refinement step.
struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

inline IntegralResult integrate_with_error(const Chart& chart, const std::vector<int>& counts,
                                           const std::function<double(const Vec&)>& f) {
  const QuadratureGrid coarse = QuadratureGrid::build(chart, counts);
  std::vector<int> fine_counts = counts;
  for (auto& c : fine_counts) c *= 2;
  const QuadratureGrid fine = QuadratureGrid::build(chart, fine_counts);
  const double vc = coarse.integrate(f);
  const double vf = fine.integrate(f);
  return {vf, std::abs(vf - vc)};
}

}  // namespace horokit
