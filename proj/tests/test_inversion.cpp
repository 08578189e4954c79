#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "horokit/fundamental.hpp"
#include "horokit/horospherical.hpp"
#include "horokit/rng.hpp"

using namespace horokit;

TEST_CASE("reconstruction constant and L_p arithmetic") {
  // n=3: c = 2 (2 pi i)^2 / 2! = -4 pi^2
  CHECK(std::abs(prop2_constant(3) - cplx(-4.0 * kPi * kPi, 0.0)) < 1e-12);
  // n=4: c = 2 (2 pi i)^3 / 3! = -(8 pi^3 / 3) i
  CHECK(std::abs(prop2_constant(4) - cplx(0.0, -8.0 * kPi * kPi * kPi / 3.0)) < 1e-12);

  HorosphericalValue hv;
  for (double v : {3.0, 5.0, 7.0}) {
    TransformValue t;
    t.value = v;
    hv.stack.push_back(t);
  }
  // n=3: (1/p) stack[0] + 2 stack[1] at p=2 -> 1.5 + 10
  CHECK(std::abs(apply_Lp(hv, 3, 2.0) - cplx(11.5)) < 1e-14);
  // n=4: (2/p) stack[1] + 2 stack[2] at p=2 -> 5 + 14
  CHECK(std::abs(apply_Lp(hv, 4, 2.0) - cplx(19.0)) < 1e-14);
}

TEST_CASE("snap_unimodular picks the nearest fourth root of unity") {
  CHECK(snap_unimodular(cplx(3.0, 0.2)) == cplx(1.0, 0.0));
  CHECK(snap_unimodular(cplx(-0.1, -2.0)) == cplx(0.0, -1.0));
  CHECK(snap_unimodular(cplx(-1.0, 0.3)) == cplx(-1.0, 0.0));
}

TEST_CASE("sphere horosphere classification by the p-normalized discriminant") {
  QuadraticSpace Q(3, 0);
  auto section_with = [&](double a) {
    CVec z(3);
    z << kI * a, 0.0, a;  // xi = a e3, eta = a e1: isotropic
    return Section(Q, z, cplx(1.0, 0.0));
  };
  const auto c1 = classify_sphere_horosphere(section_with(0.5));
  CHECK(c1.cls == SphereHoroClass::interior);
  CHECK(c1.delta == doctest::Approx(0.25));
  const auto c2 = classify_sphere_horosphere(section_with(1.0));
  CHECK(c2.cls == SphereHoroClass::boundary);
  CHECK((c2.real_point - (Vec(3) << 0.0, 0.0, 1.0).finished()).norm() < 1e-9);
  const auto c3 = classify_sphere_horosphere(section_with(1.2));
  CHECK(c3.cls == SphereHoroClass::exterior);
}

TEST_CASE("horospherical transform rejects non-isotropic sections") {
  QuadraticSpace Q(1, 2);
  const TestFunction f = make_bump((Vec(3) << 1.0, 0.0, 0.0).finished(), 0.5);
  Section s(Q, (Vec(3) << 1.0, 0.3, 0.0).finished(), 1.0);  // quad != 0
  CHECK_THROWS_AS(horo_transform(f, s), input_error);
}

TEST_CASE("reconstruction over the geodesic cycle on X_{1,2} (smoke)") {
  QuadraticSpace Q(1, 2);
  Vec x(3);
  x << std::sqrt(1.0 + 0.09), 0.3, 0.0;
  const TestFunction f = make_bump(x, 0.6);
  const Cycle cyc = geodesic_cycle(Q, SpaceKind::hyperbolic, x);
  FundamentalOptions opt;
  opt.ncycle = 32;
  opt.nouter = 48;
  opt.npan = 32;
  const TransformValue I = fundamental_form_integral(f, cyc, opt);
  const cplx expect = prop2_constant(3) * f(x);
  // allow an overall unimodular convention factor
  const cplx unit = snap_unimodular(I.value / expect);
  CHECK(std::abs(I.value - unit * expect) < 2e-2 * std::abs(expect));
}

TEST_CASE("reconstruction over the geodesic cycle on S^2 (smoke)") {
  QuadraticSpace Q(3, 0);
  Vec x(3);
  x << 0.0, 0.6, 0.8;
  const TestFunction f = make_bump(x, 0.7);
  const Cycle cyc = geodesic_cycle(Q, SpaceKind::sphere, x);
  FundamentalOptions opt;
  opt.ncycle = 32;
  opt.nphi = 96;
  opt.npan = 32;
  const TransformValue I = fundamental_form_integral(f, cyc, opt);
  const cplx expect = prop2_constant(3) * f(x);
  const cplx unit = snap_unimodular(I.value / expect);
  CHECK(std::abs(I.value - unit * expect) < 2e-2 * std::abs(expect));
}

TEST_CASE("hyperbolic inversion recovers a bump and vanishes off support (smoke)") {
  Vec x(3);
  x << std::sqrt(1.0 + 0.25), 0.5, 0.0;
  const TestFunction f = make_bump(x, 0.7);
  InvertOptions opt;
  const TransformValue at_center = invert_hyperbolic(f, x, opt);
  CHECK(std::abs(at_center.value - cplx(f(x))) < 1e-2 * std::max(1e-2, f(x)));

  Vec off_pt(3);
  off_pt << std::sqrt(1.0 + 2.25 + 0.36), 1.5, 0.6;  // outside the support ball
  REQUIRE(f(off_pt) == 0.0);
  const TransformValue off = invert_hyperbolic(f, off_pt, opt);
  CHECK(std::abs(off.value) < 1e-3 * f(x));
}

TEST_CASE("sphere inversion recovers harmonics and bumps (smoke)") {
  Vec x(3);
  x << 0.6, 0.0, 0.8;
  InvertOptions opt;
  opt.nalpha = 32;
  opt.nphi = 72;
  opt.nrad_graded = 32;
  opt.nrad_tail = 20;
  {
    const TestFunction f = make_sphere_harmonic(2, 1);
    const TransformValue v = invert_sphere(f, x, opt);
    CHECK(std::abs(v.value - cplx(f(x))) < 1e-3);
  }
  {
    const TestFunction f = make_bump((Vec(3) << 0.0, 0.0, 1.0).finished(), 0.9);
    const TransformValue v = invert_sphere(f, x, opt);
    CHECK(std::abs(v.value - cplx(f(x))) < 1e-3 * std::max(0.1, f(x)));
  }
}

TEST_CASE("circle action projects onto harmonic degrees (smoke)") {
  Vec x(3);
  x << 0.0, 0.6, 0.8;
  CircleActionOptions opt;
  const TestFunction f2 = make_sphere_harmonic(2, -1);
  const std::vector<cplx> modes = circle_action_modes(f2, x, opt);
  // self-recovery at the matching degree
  CHECK(std::abs(circle_action_project_modes(modes, 2, opt.rho) - f2(x)) < 1e-3);
  // leakage into different degrees
  CHECK(std::abs(circle_action_project_modes(modes, 3, opt.rho)) < 1e-6);
  CHECK(std::abs(circle_action_project_modes(modes, 0, opt.rho)) < 1e-6);
}

TEST_CASE("zero function inverts to zero") {
  const TestFunction z = make_bump((Vec(3) << 1.0, 0.0, 0.0).finished(), 0.4);
  TestFunction zero;
  zero.compact = true;
  zero.support = z.support;
  zero.eval = [](const Vec&) { return 0.0; };
  const TransformValue v = invert_hyperbolic(zero, (Vec(3) << 1.0, 0.0, 0.0).finished());
  CHECK(std::abs(v.value) < 1e-12);
}
