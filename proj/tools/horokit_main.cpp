// horokit command-line harness.
//
//   horokit <transform|invert|verify|classify> --config <path> [--seed N] [--out <dir>]
//
// Reads a JSON experiment configuration, runs the requested suite, and writes
// results.csv / results.json / results.svg into the output directory (atomically:
// write to a temp file, then rename).  With a fixed seed the CSV output is
// byte-identical across runs and thread counts (HOROKIT_THREADS).
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//             4 request for an unsupported operation (e.g. inversion on X_{2,n-2}).

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "horokit/horokit.hpp"

using namespace horokit;
using nlohmann::json;

namespace {

struct CliArgs {
  std::string config_path;
  uint64_t seed = 12345;
  std::string out_dir = "out";
};

Vec x12_point(double y1, double y2) {
  Vec x(3);
  x << std::sqrt(1.0 + y1 * y1 + y2 * y2), y1, y2;
  return x;
}

TestFunction random_x12_bump(Rng& rng, double spread = 0.6) {
  const Vec y = spread * rng.gaussian_vec(2);
  return make_bump(x12_point(y[0], y[1]), 0.45 + 0.25 * rng.uniform(0.0, 1.0));
}

std::string fmt_param(double v) { return format_sci(v); }

void add_param(CsvRow& row, const std::string& name, double v) {
  row.params.emplace_back(name, fmt_param(v));
}

// ---------------------------------------------------------------------------
// transform: Radon-Cauchy / horospherical transform samples
// ---------------------------------------------------------------------------
std::vector<CsvRow> run_transform(const json& cfg, Rng& rng) {
  const std::string space = cfg.value("space", "hyperbolic");
  const int nsec = cfg.value("num_sections", 6);
  const int nfun = cfg.value("num_functions", 2);
  const bool horo = cfg.value("horospherical", false);
  std::vector<CsvRow> rows;
  if (space == "hyperbolic") {
    QuadraticSpace Q(1, 2);
    for (int fi = 0; fi < nfun; ++fi) {
      const TestFunction f = random_x12_bump(rng);
      for (int si = 0; si < nsec; ++si) {
        CsvRow row;
        row.space = "X_{1,2}";
        cplx value;
        double perr = 0.0;
        if (horo) {
          // isotropic section through a random point of the horospherical cycle
          const Vec x = x12_point(0.3 * rng.normal(), 0.3 * rng.normal());
          const Cycle cyc = deformed_cycle(Q, SpaceKind::hyperbolic, x, 1.0);
          Vec th(1);
          th << rng.uniform(0.0, 2.0 * kPi);
          const CycleSection sec = cyc.section(th);
          const Section s(Q, sec.zeta, sec.p);
          const HorosphericalValue hv = horo_transform(f, s);
          value = hv.stack[0].value;
          perr = hv.stack[0].error_estimate;
          row.experiment_id = "horospherical_" + std::to_string(fi) + "_" + std::to_string(si);
          add_param(row, "theta", th[0]);
          add_param(row, "p_re", sec.p.real());
          add_param(row, "p_im", sec.p.imag());
        } else {
          const Vec xi = rng.gaussian_vec(3);
          const double p = rng.uniform(-0.5, 0.5);
          const Section s(Q, xi, p);
          RadonOptions opt;
          opt.error_estimate = true;
          const TransformValue tv = radon_cauchy(f, s, 1, opt);
          value = tv.value;
          perr = tv.error_estimate;
          row.experiment_id = "radon_" + std::to_string(fi) + "_" + std::to_string(si);
          add_param(row, "xi0", xi[0]);
          add_param(row, "xi1", xi[1]);
          add_param(row, "xi2", xi[2]);
          add_param(row, "p_re", p);
          add_param(row, "p_im", 0.0);
        }
        row.value = value;
        row.err_est = perr;
        rows.push_back(row);
      }
    }
  } else if (space == "sphere") {
    QuadraticSpace Q(3, 0);
    for (int fi = 0; fi < nfun; ++fi) {
      const TestFunction f = make_bump(rng.unit_vec(3), 0.6 + 0.2 * rng.uniform(0.0, 1.0));
      for (int si = 0; si < nsec; ++si) {
        CsvRow row;
        row.space = "S^2";
        row.experiment_id = "radon_" + std::to_string(fi) + "_" + std::to_string(si);
        const Vec xi = rng.unit_vec(3);
        const double p = rng.uniform(-0.6, 0.6);
        const Section s(Q, xi, p);
        RadonOptions opt;
        opt.error_estimate = true;
        const TransformValue tv = radon_cauchy(f, s, 1, opt);
        add_param(row, "xi0", xi[0]);
        add_param(row, "xi1", xi[1]);
        add_param(row, "xi2", xi[2]);
        add_param(row, "p_re", p);
        add_param(row, "p_im", 0.0);
        row.value = tv.value;
        row.err_est = tv.error_estimate;
        rows.push_back(row);
      }
    }
  } else if (space == "pseudo") {
    QuadraticSpace Q(2, 2);
    const Vec c = (Vec(4) << std::sqrt(1.04), 0.0, 0.2, 0.0).finished();
    const TestFunction f = make_bump(c, 0.5);
    const Cycle cyc = deformed_cycle(Q, SpaceKind::pseudo,
                                     (Vec(4) << 1.0, 0.0, 0.0, 0.0).finished(), 1.0);
    for (int si = 0; si < nsec; ++si) {
      Vec th(2);
      th << rng.uniform(0.05, kPi - 0.05), rng.uniform(0.0, 2.0 * kPi);
      const CycleSection sec = cyc.section(th);
      Section s(Q, sec.zeta, sec.p * rng.uniform(0.5, 1.6));
      const auto cls = classify_pseudo_horosphere(s, 1e-7);
      CsvRow row;
      row.space = "X_{2,2}";
      row.experiment_id = std::string("forward_") + std::to_string(si);
      add_param(row, "theta0", th[0]);
      add_param(row, "theta1", th[1]);
      add_param(row, "p_re", s.p.real());
      add_param(row, "p_im", s.p.imag());
      if (cls.cls == PseudoHoroClass::interior || cls.cls == PseudoHoroClass::real_type ||
          cls.cls == PseudoHoroClass::tangent) {
        const PseudoTransformValue v = forward_transform(f, s);
        row.value = v.value.value;
        row.err_est = v.value.error_estimate;
        row.experiment_id += "_" + v.component;
      } else {
        row.experiment_id += std::string("_") + to_string(cls.cls);
        row.pass = true;
      }
      rows.push_back(row);
    }
  } else {
    throw input_error("transform: unknown space '" + space + "'");
  }
  return rows;
}

// ---------------------------------------------------------------------------
// invert: reconstruction experiments
// ---------------------------------------------------------------------------
std::vector<CsvRow> run_invert(const json& cfg, Rng& rng) {
  const std::string space = cfg.value("space", "hyperbolic");
  const int nfun = cfg.value("num_functions", 3);
  const int npts = cfg.value("num_points", 3);
  const double tol = cfg.value("tolerance", space == "sphere" ? 1e-3 : 1e-2);
  if (space == "pseudo")
    throw unsupported_error("inversion on X_{2,n-2} is out of scope");
  std::vector<CsvRow> rows;
  for (int fi = 0; fi < nfun; ++fi) {
    if (space == "hyperbolic") {
      const TestFunction f = random_x12_bump(rng);
      for (int pi = 0; pi < npts; ++pi) {
        Vec y(2);
        const auto& ball = f.support.front();
        y << ball.center[1] + 0.4 * ball.radius * rng.normal(),
            ball.center[2] + 0.4 * ball.radius * rng.normal();
        const Vec x = x12_point(y[0], y[1]);
        const TransformValue v = invert_hyperbolic(f, x);
        CsvRow row;
        row.space = "X_{1,2}";
        row.experiment_id = "invert_" + std::to_string(fi) + "_" + std::to_string(pi);
        add_param(row, "y1", y[0]);
        add_param(row, "y2", y[1]);
        row.value = v.value;
        row.err_est = v.error_estimate;
        row.has_truth = true;
        row.truth = f(x);
        row.rel_err = std::abs(v.value - cplx(row.truth)) / std::max(1e-12, std::abs(row.truth));
        row.pass = std::abs(v.value - cplx(row.truth)) <= tol * std::max(1.0, std::abs(row.truth));
        rows.push_back(row);
      }
    } else if (space == "sphere") {
      const TestFunction f =
          (fi % 2 == 0) ? make_bump(rng.unit_vec(3), 0.8)
                        : make_sphere_harmonic(1 + fi % 3, (fi % 3 == 0) ? 0 : 1);
      for (int pi = 0; pi < npts; ++pi) {
        const Vec x = rng.unit_vec(3);
        const TransformValue v = invert_sphere(f, x);
        CsvRow row;
        row.space = "S^2";
        row.experiment_id = "invert_" + std::to_string(fi) + "_" + std::to_string(pi);
        add_param(row, "x0", x[0]);
        add_param(row, "x1", x[1]);
        add_param(row, "x2", x[2]);
        row.value = v.value;
        row.err_est = v.error_estimate;
        row.has_truth = true;
        row.truth = f(x);
        row.rel_err = std::abs(v.value - cplx(row.truth)) / std::max(1e-12, std::abs(row.truth));
        row.pass = std::abs(v.value - cplx(row.truth)) <= tol * std::max(1.0, std::abs(row.truth));
        rows.push_back(row);
      }
    } else {
      throw input_error("invert: unknown space '" + space + "'");
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// verify: identity / invariance suites
// ---------------------------------------------------------------------------
std::vector<CsvRow> run_verify(const json& cfg, Rng& rng) {
  std::vector<std::string> checks =
      cfg.value("checks", std::vector<std::string>{"homogeneity", "lemma", "ultrahyperbolic",
                                                   "cycle-independence", "measure-invariance"});
  std::vector<CsvRow> rows;
  for (const std::string& check : checks) {
    if (check == "homogeneity") {
      const TestFunction f = random_x12_bump(rng);
      for (int t = 0; t < cfg.value("trials", 4); ++t) {
        const double lam = rng.uniform(0.5, 2.0);
        const Vec xi = rng.gaussian_vec(3);
        const double p = rng.uniform(-0.4, 0.4);
        const cplx a = radon_pv_x12(f, Vec(lam * xi), lam * p, 1);
        const cplx b = radon_pv_x12(f, xi, p, 1) / lam;
        CsvRow row;
        row.space = "X_{1,2}";
        row.experiment_id = "homogeneity_" + std::to_string(t);
        add_param(row, "lambda", lam);
        row.value = a - b;
        row.has_truth = true;
        row.truth = 0.0;
        row.rel_err = std::abs(a - b) / (1.0 + std::abs(b));
        row.pass = row.rel_err <= 1e-6;
        rows.push_back(row);
      }
    } else if (check == "lemma") {
      for (int t = 0; t < cfg.value("trials", 4); ++t) {
        Mat A(3, 3);
        for (int i = 0; i < 3; ++i) A.row(i) = rng.gaussian_vec(3).transpose();
        auto a = [A](const Vec& xi) { return Vec((A * xi) / std::pow(xi.norm(), 3.0)); };
        const Vec xi0 = 2.0 * rng.unit_vec(3);
        std::vector<Vec> frame = {rng.gaussian_vec(3), rng.gaussian_vec(3)};
        const double r1 = lemma1_residual(a, xi0, frame, 1e-2);
        const double r2 = lemma1_residual(a, xi0, frame, 5e-3);
        const double order = (r2 > 1e-12) ? std::log2(r1 / r2) : 2.0;
        CsvRow row;
        row.space = "R^3";
        row.experiment_id = "lemma_" + std::to_string(t);
        add_param(row, "h", 1e-2);
        row.value = r1;
        row.has_truth = true;
        row.truth = 0.0;
        row.rel_err = r1;
        row.pass = order > 1.9;
        rows.push_back(row);
      }
    } else if (check == "ultrahyperbolic") {
      const TestFunction f = random_x12_bump(rng, 0.4);
      const Vec xi = rng.gaussian_vec(3);
      const double p = rng.uniform(-0.3, 0.3);
      const UltraResult ur = ultrahyperbolic_residual_x12(f, xi, p, {0.04, 0.02, 0.01});
      CsvRow row;
      row.space = "X_{1,2}";
      row.experiment_id = "ultrahyperbolic";
      add_param(row, "h_min", ur.steps.back());
      row.value = ur.residuals.back();
      row.err_est = ur.noise_floor;
      row.has_truth = true;
      row.truth = 0.0;
      row.rel_err = ur.residuals.back();
      row.pass = ur.order > 1.5;
      rows.push_back(row);
    } else if (check == "cycle-independence") {
      QuadraticSpace Q(1, 2);
      const Vec x = x12_point(0.2, -0.1);
      const TestFunction f = make_bump(x12_point(0.4, 0.1), 0.6);
      const CycleIndependence ci = cycle_independence_check(
          f, Q, SpaceKind::hyperbolic, x, cfg.value("rhos", std::vector<double>{0.0, 0.5, 1.0}));
      CsvRow row;
      row.space = "X_{1,2}";
      row.experiment_id = "cycle_independence";
      add_param(row, "num_rho", static_cast<double>(ci.rhos.size()));
      row.value = ci.reference;
      row.err_est = ci.max_deviation;
      row.has_truth = true;
      row.truth = std::abs(ci.reference);
      row.rel_err = ci.max_deviation / std::max(1e-12, std::abs(ci.reference));
      row.pass = row.rel_err <= 1e-3;
      rows.push_back(row);
    } else if (check == "measure-invariance") {
      QuadraticSpace Q(1, 2);
      for (int t = 0; t < cfg.value("trials", 3); ++t) {
        const TestFunction f = random_x12_bump(rng);
        Mat g = group_element(Q, 0, 1, rng.uniform(-0.5, 0.5)) *
                group_element(Q, 1, 2, rng.uniform(0.0, 2.0 * kPi));
        auto integral = [&](const TestFunction& fn) {
          double mx = 0.0;
          for (const auto& b : fn.support) mx = std::max(mx, b.center.tail(2).norm() + b.radius);
          HyperbolicGraphChart chart(3, +1.0, mx * 1.1 + 0.2);
          const QuadratureGrid grid = QuadratureGrid::build(chart, {320, 320});
          return grid.integrate([&](const Vec& y) { return fn(y); });
        };
        const double i0 = integral(f);
        const double i1 = integral(precompose(f, g));
        CsvRow row;
        row.space = "X_{1,2}";
        row.experiment_id = "measure_invariance_" + std::to_string(t);
        add_param(row, "trial", static_cast<double>(t));
        row.value = i0 - i1;
        row.has_truth = true;
        row.truth = 0.0;
        row.rel_err = std::abs(i0 - i1);
        row.pass = row.rel_err <= 1e-6;
        rows.push_back(row);
      }
    } else {
      throw input_error("verify: unknown check '" + check + "'");
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// classify: X_{2,n-2} horosphere classification
// ---------------------------------------------------------------------------
std::vector<CsvRow> run_classify(const json& cfg, Rng& rng) {
  const int n = cfg.value("n", 4);
  const int nsec = cfg.value("num_sections", 40);
  const bool with_oracle = cfg.value("oracle", false);
  QuadraticSpace Q(2, n - 2);
  std::vector<CsvRow> rows;
  Vec x = Vec::Zero(n);
  x[0] = 1.0;
  const Cycle cyc = deformed_cycle(Q, SpaceKind::pseudo, x, 1.0);
  for (int si = 0; si < nsec; ++si) {
    Vec th(n - 2);
    if (n == 4) {
      th << rng.uniform(0.0, kPi), rng.uniform(0.0, 2.0 * kPi);
    } else {
      throw unsupported_error("classify: cycle sampling implemented for n=4");
    }
    const CycleSection sec = cyc.section(th);
    Section s(Q, sec.zeta, sec.p * rng.uniform(0.4, 1.7));
    const auto cls = classify_pseudo_horosphere(s, 1e-7);
    CsvRow row;
    row.space = "X_{2," + std::to_string(n - 2) + "}";
    row.experiment_id = std::string("classify_") + std::to_string(si) + "_" + to_string(cls.cls) +
                        (cls.cls == PseudoHoroClass::tangent
                             ? std::string(1, cls.component)
                             : std::string());
    add_param(row, "p_re", s.p.real());
    add_param(row, "p_im", s.p.imag());
    add_param(row, "box_xi", cls.Q);
    add_param(row, "margin", cls.margin);
    row.value = cls.Q;
    if (with_oracle && cls.margin > 1e-6) {
      const RealPointSearch search = brute_force_real_points(s);
      bool agree = false;
      switch (cls.cls) {
        case PseudoHoroClass::interior: agree = search.hits.empty(); break;
        case PseudoHoroClass::tangent: agree = !search.hits.empty() && search.localized(1e-2); break;
        case PseudoHoroClass::real_type:
        case PseudoHoroClass::infinite_intersection: agree = search.hits.size() >= 2; break;
        case PseudoHoroClass::degenerate: agree = true; break;
      }
      row.has_truth = true;
      row.truth = agree ? 1.0 : 0.0;
      row.rel_err = agree ? 0.0 : 1.0;
      row.pass = agree;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_outputs(const std::string& out_dir, const std::string& sub, const json& cfg,
                   uint64_t seed, const std::vector<CsvRow>& rows) {
  const std::string csv = csv_table(rows);
  write_text_atomic(out_dir + "/results.csv", csv);

  json meta;
  meta["command"] = sub;
  meta["seed"] = seed;
  meta["config_fnv1a"] = fnv1a(cfg.dump());
  meta["rows"] = json::array();
  for (const auto& r : rows) {
    json jr;
    jr["experiment_id"] = r.experiment_id;
    jr["space"] = r.space;
    for (const auto& [k, v] : r.params) jr["params"][k] = v;
    jr["value_re"] = format_sci(r.value.real());
    jr["value_im"] = format_sci(r.value.imag());
    jr["err_est"] = format_sci(r.err_est);
    if (r.has_truth) {
      jr["truth"] = format_sci(r.truth);
      jr["rel_err"] = format_sci(r.rel_err);
    }
    jr["pass"] = r.pass;
    meta["rows"].push_back(jr);
  }
  write_text_atomic(out_dir + "/results.json", meta.dump(2) + "\n");

  std::vector<double> xs, ys;
  for (size_t i = 0; i < rows.size(); ++i) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::max(std::abs(rows[i].value), 1e-16));
  }
  write_text_atomic(out_dir + "/results.svg",
                    svg_polyline(xs, ys, sub + ": |value| per experiment", true));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horokit: numerical Cauchy-Radon and horospherical transforms on quadrics"};
  app.require_subcommand(1);
  CliArgs args;
  std::vector<CLI::App*> subs;
  for (const char* name : {"transform", "invert", "verify", "classify"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config_path, "JSON experiment configuration")->required();
    sub->add_option("--seed", args.seed, "random seed");
    sub->add_option("--out", args.out_dir, "output directory");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  json cfg;
  {
    std::ifstream is(args.config_path);
    if (!is) {
      std::fprintf(stderr, "error: cannot open config '%s'\n", args.config_path.c_str());
      return 2;
    }
    try {
      is >> cfg;
    } catch (const json::exception& e) {
      std::fprintf(stderr, "error: malformed JSON config: %s\n", e.what());
      return 2;
    }
  }
  if (cfg.contains("seed")) args.seed = cfg["seed"].get<uint64_t>();

  try {
    Rng rng(args.seed);
    std::vector<CsvRow> rows;
    if (sub == "transform") {
      rows = run_transform(cfg, rng);
    } else if (sub == "invert") {
      rows = run_invert(cfg, rng);
    } else if (sub == "verify") {
      rows = run_verify(cfg, rng);
    } else {
      rows = run_classify(cfg, rng);
    }
    write_outputs(args.out_dir, sub, cfg, args.seed, rows);
    int failures = 0;
    for (const auto& r : rows)
      if (!r.pass) ++failures;
    std::printf("%s: %zu rows, %d failed checks -> %s/results.csv\n", sub.c_str(), rows.size(),
                failures, args.out_dir.c_str());
    return 0;
  } catch (const input_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const unsupported_error& e) {
    std::fprintf(stderr, "unsupported operation: %s\n", e.what());
    return 4;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const domain_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}
