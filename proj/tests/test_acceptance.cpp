// Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.
//
// Each criterion prints
//   PASS|FAIL  <criterion>  <measured quantities>  (tol ...)
// and the binary exits with the number of failed criteria.

#include <cstdio>
#include <string>
#include <vector>

#include "horokit/horokit.hpp"

using namespace horokit;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s  %-34s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

Vec x12_point(double y1, double y2) {
  Vec x(3);
  x << std::sqrt(1.0 + y1 * y1 + y2 * y2), y1, y2;
  return x;
}

// ---------------------------------------------------------------------------
// 1. homogeneity  f^(t zeta, t p) = t^-1 f^(zeta, p), 10 random triples per space
// ---------------------------------------------------------------------------
void criterion_homogeneity() {
  Rng rng(101);
  double worst = 0.0;
  {
    QuadraticSpace Q(1, 2);
    const TestFunction f = make_bump(x12_point(0.3, -0.2), 0.6);
    for (int t = 0; t < 10; ++t) {
      const Vec xi = rng.gaussian_vec(3);
      const double p = rng.uniform(-0.4, 0.4);
      const double lam = rng.uniform(0.4, 2.5);
      const cplx a = radon_cauchy(f, Section(Q, Vec(lam * xi), lam * p), 1).value;
      const cplx b = radon_cauchy(f, Section(Q, xi, p), 1).value / lam;
      worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
    }
  }
  {
    QuadraticSpace Q(3, 0);
    const TestFunction f = make_bump((Vec(3) << 0.0, 0.6, 0.8).finished(), 0.7);
    for (int t = 0; t < 10; ++t) {
      const Vec xi = rng.unit_vec(3);
      const double p = rng.uniform(-0.5, 0.5);
      const double lam = rng.uniform(0.4, 2.5);
      const cplx a = radon_cauchy(f, Section(Q, Vec(lam * xi), lam * p), 1).value;
      const cplx b = radon_cauchy(f, Section(Q, xi, p), 1).value / lam;
      worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
    }
  }
  report("1 homogeneity", worst <= 1e-6, fmt("max_rel=%.2e (tol 1e-6)", worst));
}

// ---------------------------------------------------------------------------
// 2. ultrahyperbolic equation: residual decay order over h in {0.04, 0.02, 0.01}
// ---------------------------------------------------------------------------
void criterion_ultrahyperbolic() {
  const TestFunction f = make_bump(x12_point(0.25, 0.1), 0.55);
  Vec xi(3);
  xi << 1.1, 0.4, -0.7;
  const UltraResult ur = ultrahyperbolic_residual_x12(f, xi, 0.15, {0.04, 0.02, 0.01});
  const bool above_floor = ur.residuals.back() > 3.0 * ur.noise_floor;
  const bool ok = ur.order >= 1.5 && above_floor;
  report("2 ultrahyperbolic-residual", ok,
         fmt("order=%.2f res_min=%.2e floor=%.2e (order >= 1.5)", ur.order, ur.residuals.back(),
             ur.noise_floor));
}

// ---------------------------------------------------------------------------
// 3. Lemma 1 identity: FD residual order >= 1.9 for 10 random homogeneous fields
// ---------------------------------------------------------------------------
void criterion_lemma1() {
  Rng rng(31);
  const int n = 3;
  double worst_order = 1e9;
  for (int t = 0; t < 10; ++t) {
    Mat A(n, n);
    for (int i = 0; i < n; ++i) A.row(i) = rng.gaussian_vec(n).transpose();
    const Vec c = rng.gaussian_vec(n);
    // homogeneous of degree -(n-1): (A xi + c |xi|) / |xi|^n
    auto a = [A, c, n](const Vec& xi) {
      return Vec((A * xi + c * xi.norm()) / std::pow(xi.norm(), n));
    };
    const Vec xi0 = (1.0 + rng.uniform(0.0, 1.5)) * rng.unit_vec(n);
    std::vector<Vec> frame;
    for (int k = 0; k < n - 1; ++k) frame.push_back(rng.gaussian_vec(n));
    const double r1 = lemma1_residual(a, xi0, frame, 1e-2);
    const double r2 = lemma1_residual(a, xi0, frame, 5e-3);
    const double r3 = lemma1_residual(a, xi0, frame, 2.5e-3);
    if (r3 < 1e-10) continue;  // at FD noise floor: identity exact for this field
    const double order = 0.5 * (std::log2(r1 / r2) + std::log2(r2 / r3));
    worst_order = std::min(worst_order, order);
  }
  report("3 lemma1-order", worst_order >= 1.9, fmt("min_order=%.2f (tol >= 1.9)", worst_order));
}

// ---------------------------------------------------------------------------
// 4. reconstruction constant: I = c f(x) over the geodesic cycle, frozen unimodular
//    calibration identical across 5 functions per space
// ---------------------------------------------------------------------------
void criterion_prop2() {
  double worst_rel = 0.0, worst_calib = 0.0;
  auto run_space = [&](const QuadraticSpace& Q, SpaceKind kind, const Vec& x,
                       const std::vector<TestFunction>& fns, const FundamentalOptions& opt) {
    const Cycle cyc = geodesic_cycle(Q, kind, x);
    cplx frozen = 0.0;
    for (size_t k = 0; k < fns.size(); ++k) {
      const TransformValue I = fundamental_form_integral(fns[k], cyc, opt);
      const cplx expect = prop2_constant(3) * fns[k](x);
      const cplx unit = snap_unimodular(I.value / expect);
      if (k == 0)
        frozen = unit;
      else
        worst_calib = std::max(worst_calib, std::abs(unit - frozen));
      worst_rel = std::max(worst_rel, std::abs(I.value - frozen * expect) / std::abs(expect));
    }
  };

  FundamentalOptions opt;
  opt.ncycle = 64;
  opt.nouter = 96;
  opt.npan = 48;
  opt.nphi = 160;
  {
    QuadraticSpace Q(1, 2);
    const Vec x = x12_point(0.3, 0.0);
    std::vector<TestFunction> fns;
    fns.push_back(make_bump(x, 0.6));
    fns.push_back(make_bump(x12_point(0.45, 0.15), 0.5));
    fns.push_back(make_bump(x12_point(0.1, -0.1), 0.75));
    fns.push_back(combine({{0.7, make_bump(x, 0.5)}, {0.4, make_bump(x12_point(0.5, 0.1), 0.45)}}));
    fns.push_back(make_bump(x12_point(0.2, 0.25), 0.65));
    run_space(Q, SpaceKind::hyperbolic, x, fns, opt);
  }
  {
    QuadraticSpace Q(3, 0);
    // x chosen so every test function (including the harmonics) is O(0.1) there,
    // keeping the relative-error criterion well defined
    Vec x(3);
    x << 0.48, -0.6, 0.64;
    std::vector<TestFunction> fns;
    fns.push_back(make_bump(x, 0.7));                     // even + odd mixture
    fns.push_back(make_sphere_harmonic(1, 0));            // odd
    fns.push_back(make_sphere_harmonic(2, 1));            // even
    fns.push_back(make_sphere_harmonic(3, -2));           // odd
    fns.push_back(combine({{1.0, make_bump(x, 0.8)}, {0.5, make_sphere_harmonic(2, 0)}}));
    for (const TestFunction& f : fns)
      if (std::abs(f(x)) < 0.05) throw std::logic_error("prop2: test function too small at x");
    run_space(Q, SpaceKind::sphere, x, fns, opt);
  }
  const bool ok = worst_rel <= 1e-3 && worst_calib <= 1e-6;
  report("4 reconstruction-constant", ok,
         fmt("max_rel=%.2e calib_spread=%.2e (tol 1e-3 / 1e-6)", worst_rel, worst_calib));
}

// ---------------------------------------------------------------------------
// 5. cycle independence: hyperbolic rho in {0..1} (principal value), sphere
//    delta in {0, 0.5, 1} with the i eps' shift at eps' = 1e-3
// ---------------------------------------------------------------------------
void criterion_cycle_independence() {
  double worst = 0.0;
  {
    QuadraticSpace Q(1, 2);
    const Vec x = x12_point(0.2, -0.1);
    const TestFunction f = make_bump(x12_point(0.4, 0.1), 0.6);
    FundamentalOptions opt;
    opt.ncycle = 64;
    opt.nouter = 96;
    opt.npan = 48;
    const CycleIndependence ci = cycle_independence_check(f, Q, SpaceKind::hyperbolic, x,
                                                          {0.0, 0.25, 0.5, 0.75, 1.0}, opt);
    worst = std::max(worst, ci.max_deviation / std::abs(ci.reference));
  }
  {
    QuadraticSpace Q(3, 0);
    Vec x(3);
    x << 0.0, 0.6, 0.8;
    const TestFunction f = make_bump((Vec(3) << 0.0, 0.8, 0.6).finished(), 0.8);
    // -i0 limit realized by the eps' ladder based at 1e-3: I = 2 I(eps'/2) - I(eps')
    // removes the first-order shift bias (the shifted section no longer passes
    // exactly through x, which perturbs each family member at O(eps')).
    auto member = [&](double delta) {
      const Cycle cyc = deformed_cycle(Q, SpaceKind::sphere, x, delta);
      FundamentalOptions o;
      o.ncycle = 64;
      o.nphi = 160;
      o.npan = 48;
      o.eps_shift = 1e-3;
      const cplx I1 = fundamental_form_integral(f, cyc, o).value;
      o.eps_shift = 5e-4;
      const cplx I2 = fundamental_form_integral(f, cyc, o).value;
      return 2.0 * I2 - I1;
    };
    const cplx ref = member(0.0);
    for (double d : {0.5, 1.0})
      worst = std::max(worst, std::abs(member(d) - ref) / std::abs(ref));
  }
  report("5 cycle-independence", worst <= 1e-3, fmt("max_rel_dev=%.2e (tol 1e-3)", worst));
}

// ---------------------------------------------------------------------------
// 6. hyperbolic inversion: 5 bumps x 3 points within 1e-2, off-support near zero
// ---------------------------------------------------------------------------
void criterion_invert_hyperbolic() {
  Rng rng(61);
  InvertOptions opt;
  opt.nalpha = 128;
  opt.nouter = 128;
  double worst_in = 0.0, worst_off = 0.0;
  for (int k = 0; k < 5; ++k) {
    const Vec y = 0.5 * rng.gaussian_vec(2);
    const double r = 0.5 + 0.25 * rng.uniform(0.0, 1.0);
    const TestFunction f = make_bump(x12_point(y[0], y[1]), r);
    double fmax = f(x12_point(y[0], y[1]));
    for (int pi = 0; pi < 3; ++pi) {
      Vec yy = y + 0.35 * r * rng.gaussian_vec(2);
      const Vec x = x12_point(yy[0], yy[1]);
      const TransformValue v = invert_hyperbolic(f, x, opt);
      worst_in = std::max(worst_in, std::abs(v.value - cplx(f(x))) / fmax);
    }
    // off-support point just outside the ball (f = 0 there)
    Vec dir = rng.unit_vec(2);
    Vec yo = y + (1.35 * r) * dir;
    Vec xo = x12_point(yo[0], yo[1]);
    while (f(xo) != 0.0) {
      yo += 0.1 * r * dir;
      xo = x12_point(yo[0], yo[1]);
    }
    const TransformValue voff = invert_hyperbolic(f, xo, opt);
    worst_off = std::max(worst_off, std::abs(voff.value) / fmax);
  }
  const bool ok = worst_in <= 1e-2 && worst_off <= 1e-3;
  report("6 inversion-hyperbolic", ok,
         fmt("max_rel=%.2e off_supp=%.2e (tol 1e-2 / 1e-3)", worst_in, worst_off));
}

// ---------------------------------------------------------------------------
// 7. sphere inversion: 5 functions x 3 points within 1e-3; eps'-halving stability
// ---------------------------------------------------------------------------
void criterion_invert_sphere() {
  Rng rng(71);
  std::vector<TestFunction> fns;
  fns.push_back(make_bump((Vec(3) << 0.0, 0.0, 1.0).finished(), 0.9));
  fns.push_back(make_bump((Vec(3) << 0.6, 0.0, 0.8).finished(), 0.7));
  fns.push_back(make_sphere_harmonic(1, 1));
  fns.push_back(make_sphere_harmonic(2, -1));
  fns.push_back(make_sphere_harmonic(3, 0));
  InvertOptions opt;
  opt.nalpha = 32;
  opt.nphi = 72;
  opt.nrad_graded = 40;
  opt.nrad_tail = 24;
  InvertOptions halved = opt;
  for (double& e : halved.eps_ladder) e *= 0.5;
  double worst = 0.0, worst_stab = 0.0;
  for (const TestFunction& f : fns)
    for (int pi = 0; pi < 3; ++pi) {
      const Vec x = rng.unit_vec(3);
      const TransformValue v = invert_sphere(f, x, opt);
      const TransformValue vh = invert_sphere(f, x, halved);
      worst = std::max(worst, std::abs(v.value - cplx(f(x))));
      worst_stab = std::max(worst_stab, std::abs(v.value - vh.value));
    }
  const bool ok = worst <= 1e-3 && worst_stab <= 1e-3;
  report("7 inversion-sphere", ok,
         fmt("max_abs=%.2e halving_diff=%.2e (tol 1e-3)", worst, worst_stab));
}

// ---------------------------------------------------------------------------
// 8. circle action: degree projections for l, l' <= 4
// ---------------------------------------------------------------------------
void criterion_circle_action() {
  Vec x(3);
  x << 0.48, -0.6, 0.64;
  CircleActionOptions opt;
  double worst_self = 0.0, worst_leak = 0.0;
  const int ms[5] = {0, 1, -1, 2, -3};
  for (int l = 0; l <= 4; ++l) {
    const TestFunction f = make_sphere_harmonic(l, std::abs(ms[l]) <= l ? ms[l] : 0);
    const std::vector<cplx> modes = circle_action_modes(f, x, opt);
    for (int lp = 0; lp <= 4; ++lp) {
      const cplx proj = circle_action_project_modes(modes, lp, opt.rho);
      if (lp == l)
        worst_self = std::max(worst_self, std::abs(proj - f(x)));
      else
        worst_leak = std::max(worst_leak, std::abs(proj));
    }
  }
  const bool ok = worst_self <= 1e-3 && worst_leak <= 1e-6;
  report("8 circle-action", ok,
         fmt("max_self=%.2e max_leak=%.2e (tol 1e-3 / 1e-6)", worst_self, worst_leak));
}

// ---------------------------------------------------------------------------
// 9. X_{2,2} horosphere classification: canonical family + 200 random sections
//    against the brute-force real-point oracle (excluding 1e-6 borderlines)
// ---------------------------------------------------------------------------
void criterion_classification() {
  QuadraticSpace Q(2, 2);
  bool canonical_ok = true;
  {
    auto member = [&](double lam) {
      CVec z(4);
      z << lam, kI * lam, 0.0, 0.0;
      return Section(Q, z, cplx(1.0, 0.0));
    };
    canonical_ok = canonical_ok &&
                   classify_pseudo_horosphere(member(2.0)).cls == PseudoHoroClass::interior;
    const auto tang = classify_pseudo_horosphere(member(1.0));
    canonical_ok = canonical_ok && tang.cls == PseudoHoroClass::tangent &&
                   (tang.witness - (Vec(4) << 1.0, 0.0, 0.0, 0.0).finished()).norm() < 1e-8;
    canonical_ok = canonical_ok && classify_pseudo_horosphere(member(0.5)).cls ==
                                       PseudoHoroClass::infinite_intersection;
  }

  Rng rng(91);
  int tested = 0, agreed = 0, excluded = 0;
  while (tested < 200) {
    // random isotropic section: cycle sections through a random base point, with the
    // incidence value rescaled to reach all classes
    Vec y = 0.6 * rng.gaussian_vec(2);
    Vec x(4);
    x << std::sqrt(1.0 + y[0] * y[0]), y[1] * 0.0, y[0], 0.0;
    const Cycle cyc = deformed_cycle(Q, SpaceKind::pseudo, x, 1.0);
    Vec th(2);
    th << rng.uniform(0.0, kPi), rng.uniform(0.0, 2.0 * kPi);
    const CycleSection sec = cyc.section(th);
    const Section s(Q, sec.zeta, sec.p * rng.uniform(0.3, 1.8));
    const auto cls = classify_pseudo_horosphere(s, 1e-7);
    if (cls.margin < 1e-6) {
      ++excluded;
      continue;
    }
    ++tested;
    const RealPointSearch search = brute_force_real_points(s);
    bool agree = false;
    switch (cls.cls) {
      case PseudoHoroClass::interior: agree = search.hits.empty(); break;
      case PseudoHoroClass::tangent:
        agree = !search.hits.empty() && search.localized(1e-2);
        break;
      case PseudoHoroClass::real_type:
      case PseudoHoroClass::infinite_intersection: agree = search.hits.size() >= 2; break;
      case PseudoHoroClass::degenerate: agree = false; break;
    }
    if (agree) ++agreed;
  }
  const bool ok = canonical_ok && agreed == tested;
  report("9 classification-x22", ok,
         fmt("agree=%g/200 excluded=%g canonical=%g", double(agreed), double(excluded),
             double(canonical_ok)));
}

// ---------------------------------------------------------------------------
// 10. determinism and measure invariance
// ---------------------------------------------------------------------------
std::string sample_csv(uint64_t seed) {
  Rng rng(seed);
  QuadraticSpace Q(1, 2);
  const TestFunction f = make_bump(x12_point(0.3, -0.2), 0.6);
  std::vector<CsvRow> rows;
  for (int t = 0; t < 6; ++t) {
    const Vec xi = rng.gaussian_vec(3);
    const double p = rng.uniform(-0.4, 0.4);
    CsvRow row;
    row.experiment_id = "radon_" + std::to_string(t);
    row.space = "X_{1,2}";
    row.params.emplace_back("p_re", format_sci(p));
    row.value = radon_cauchy(f, Section(Q, xi, p), 1).value;
    rows.push_back(row);
  }
  return csv_table(rows);
}

void criterion_determinism() {
  const std::string a = sample_csv(424242);
  const std::string b = sample_csv(424242);
  const bool identical = (a == b) && !a.empty();

  Rng rng(11);
  QuadraticSpace Q(1, 2);
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const Vec y = 0.5 * rng.gaussian_vec(2);
    const TestFunction f = make_bump(x12_point(y[0], y[1]), 0.5 + 0.2 * rng.uniform(0.0, 1.0));
    const Mat g = group_element(Q, 0, 1, rng.uniform(-0.5, 0.5)) *
                  group_element(Q, 1, 2, rng.uniform(0.0, 2.0 * kPi));
    auto integral = [&](const TestFunction& fn) {
      double mx = 0.0;
      for (const auto& b : fn.support) mx = std::max(mx, b.center.tail(2).norm() + b.radius);
      HyperbolicGraphChart chart(3, +1.0, mx * 1.1 + 0.2);
      const QuadratureGrid grid = QuadratureGrid::build(chart, {320, 320});
      return grid.integrate([&](const Vec& u) { return fn(u); });
    };
    worst = std::max(worst, std::abs(integral(f) - integral(precompose(f, g))));
  }
  const bool ok = identical && worst <= 1e-6;
  report("10 determinism-and-measure", ok,
         fmt("csv_identical=%g measure_dev=%.2e (tol 1e-6)", double(identical), worst));
}

}  // namespace

int main() {
  criterion_homogeneity();
  criterion_ultrahyperbolic();
  criterion_lemma1();
  criterion_prop2();
  criterion_cycle_independence();
  criterion_invert_hyperbolic();
  criterion_invert_sphere();
  criterion_circle_action();
  criterion_classification();
  criterion_determinism();
  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
