// Release gate: re-runs the headline numerical checks end to end and prints
// one [PASS]/[FAIL] line per check. Exit code = number of failed checks.
// Every tolerance is pinned here, next to the check that uses it.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rootbeyond/experiments.hpp"
#include "test_support.hpp"

using namespace rootbeyond;
using cplx = std::complex<double>;

namespace {

int g_failures = 0;
int g_warnings = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
  if (!ok) ++g_failures;
}

void warn(int id, const char* title, bool ok, const std::string& detail) {
  if (!ok) {
    std::printf("[WARN] %d %s: %s\n", id, title, detail.c_str());
    ++g_warnings;
  }
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Far-start behaviour of plain newton on e^x - H, H = 500.

void check_1() {
  const ScalarProblem<double> p = make_exp_h(500.0);
  SolverConfig<double> cfg;
  cfg.tol_residual = 1e-12;
  cfg.max_iter = 50;

  const double t0 = now_ms();
  const auto div = solve_scalar(p, 0.0, cfg);
  const double t1 = now_ms();
  const auto conv = solve_scalar(p, 3.0, cfg);
  const double t2 = now_ms();

  const bool leg_a = div.status != SolveStatus::converged && div.iterations_used <= 50;

  // From x0 = 3 the error |x_n - ln H| must drop below 1e-10 by n = 20.
  int first_tight = -1;
  for (size_t n = 0; n < conv.errors.size(); ++n)
    if (conv.errors[n] <= 1e-10) {
      first_tight = static_cast<int>(n);
      break;
    }
  const bool leg_b = conv.status == SolveStatus::converged && first_tight >= 0 &&
                     first_tight <= 20;

  const bool timing = (t1 - t0) < 1.0 && (t2 - t1) < 1.0;

  std::string detail;
  if (leg_a)
    detail += fmt("x0=0 flagged %s after %d step(s); ", status_name(div.status),
                  div.iterations_used);
  else
    detail += fmt("x0=0 unexpectedly %s; ", status_name(div.status));
  if (leg_b)
    detail += fmt("x0=3 reaches |x-lnH|<=1e-10 at n=%d", first_tight);
  else
    detail += fmt(
        "x0=3 reaches |x-lnH|<=1e-10 only at n=%d (budget n<=20; error at n=20 is %.3g) -- "
        "the early iterations crawl back from the e^x overshoot one ln-unit per step, so "
        "the budget is not attainable for this start",
        first_tight, conv.errors.size() > 20 ? conv.errors[20] : -1.0);
  if (!timing) detail += fmt("; slow: %.3f ms / %.3f ms", t1 - t0, t2 - t1);

  report(1, "newton far-start profile on exp_h", leg_a && leg_b && timing, detail);
}

// ---------------------------------------------------------------------------
// 2. Second-order and probe-based methods fix the far start.

void check_2() {
  const ScalarProblem<double> p = make_exp_h(500.0);
  const double t0 = now_ms();

  SolverConfig<double> cn_cfg;
  cn_cfg.method = Method::cn;
  cn_cfg.tol_residual = 1e-12;
  cn_cfg.max_iter = 15;
  const auto cn = solve_scalar(p, 0.0, cn_cfg);
  const bool cn_ok = cn.status == SolveStatus::converged && cn.iterations_used <= 15;

  int worst_en = 0;
  int en_failures = 0;
  for (int c = -49; c <= 49; ++c) {
    if (c == 0) continue;
    SolverConfig<double> en_cfg;
    en_cfg.method = Method::en;
    en_cfg.c = static_cast<double>(c);
    en_cfg.tol_residual = 1e-12;
    en_cfg.max_iter = 50;
    const auto tr = solve_scalar(p, 0.0, en_cfg);
    if (tr.status != SolveStatus::converged)
      ++en_failures;
    else
      worst_en = std::max(worst_en, tr.iterations_used);
  }
  const double elapsed = now_ms() - t0;
  const bool en_ok = en_failures == 0 && worst_en <= 50;
  const bool timing = elapsed < 100.0;

  report(2, "cn and en recover the far start", cn_ok && en_ok && timing,
         fmt("cn from 0 in %d steps; en converged for all 98 integer probes c in [-49,49], "
             "worst %d steps, %d failures; %.1f ms",
             cn.iterations_used, worst_en, en_failures, elapsed));
}

// ---------------------------------------------------------------------------
// 3. Stiffness sweep over H, checked against the committed table.

struct BaselineRow {
  std::string method;
  double h = 0;
  int iterations = 0;
  std::string status;
};

std::vector<BaselineRow> load_h_baseline(const std::string& path) {
  std::ifstream f(path);
  std::vector<BaselineRow> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("method,", 0) == 0) continue;
    std::istringstream ss(line);
    BaselineRow row;
    std::string field;
    std::getline(ss, row.method, ',');
    std::getline(ss, field, ',');
    row.h = std::stod(field);
    std::getline(ss, field, ',');
    row.iterations = std::stoi(field);
    std::getline(ss, row.status, ',');
    rows.push_back(row);
  }
  return rows;
}

void check_3() {
  const std::vector<double> hs = {10.0, 100.0, 1e3, 1e4, 1e5, 1e6};
  auto run = [&](Method m, std::optional<double> c) {
    SolverConfig<double> cfg;
    cfg.method = m;
    if (c) cfg.c = *c;
    cfg.tol_residual = 1e-9;
    cfg.max_iter = 100;
    return sweep_parameter_h(m, cfg, hs, 0.0);
  };
  const auto newton = run(Method::newton, std::nullopt);
  const auto en = run(Method::en, 1.0);
  const auto cn = run(Method::cn, std::nullopt);

  bool shape_ok = newton[0].status == SolveStatus::converged;
  for (size_t k = 2; k < hs.size(); ++k)
    shape_ok = shape_ok && newton[k].status != SolveStatus::converged;
  for (size_t k = 0; k < hs.size(); ++k) {
    shape_ok = shape_ok && en[k].status == SolveStatus::converged;
    shape_ok = shape_ok && cn[k].status == SolveStatus::converged;
  }

  const auto baseline = load_h_baseline(std::string(BASELINE_DIR) + "/h_sweep.csv");
  int mismatches = 0;
  int matched = 0;
  for (const auto& row : baseline) {
    const std::vector<SweepRow>* rows = nullptr;
    if (row.method == "newton") rows = &newton;
    if (row.method == "en") rows = &en;
    if (row.method == "cn") rows = &cn;
    if (!rows) continue;
    for (size_t k = 0; k < hs.size(); ++k) {
      if (hs[k] != row.h) continue;
      ++matched;
      if ((*rows)[k].iterations != row.iterations ||
          status_name((*rows)[k].status) != row.status)
        ++mismatches;
    }
  }
  const bool baseline_ok = matched == 18 && mismatches == 0;

  report(3, "H sweep matches the committed table", shape_ok && baseline_ok,
         fmt("newton holds only small H (H=10 in %d steps, H>=1e3 %s); en/cn converge for all "
             "six H; %d/18 baseline rows matched, %d mismatches",
             newton[0].iterations, status_name(newton[2].status), matched, mismatches));
}

// ---------------------------------------------------------------------------
// 4. Two-spring system, H = 500, from the origin.

void check_4() {
  const VectorProblem p = make_two_spring(500.0);
  auto run = [&](Method m, std::vector<double> c) {
    VectorSolverConfig cfg;
    cfg.method = m;
    cfg.c = std::move(c);
    cfg.tol_residual = 1e-9;
    cfg.max_iter = 100;
    return solve_vector(p, {0.0, 0.0}, cfg);
  };
  const auto newton = run(Method::newton, {});
  const auto cn = run(Method::cn, {});
  const auto en = run(Method::en, {-0.5, -0.6});

  const bool ok = newton.status != SolveStatus::converged &&
                  cn.status == SolveStatus::converged && cn.iterations_used < 10 &&
                  en.status == SolveStatus::converged && en.iterations_used < 10;
  report(4, "two_spring H=500 from the origin", ok,
         fmt("newton %s after %d; cn converged in %d; en(c=(-0.5,-0.6)) converged in %d",
             status_name(newton.status), newton.iterations_used, cn.iterations_used,
             en.iterations_used));
}

// ---------------------------------------------------------------------------
// 5. Easom gradient basin: share of cells reaching the stationary point.

void check_5() {
  const CatalogEntry entry = parse_problem_spec("easom");
  const RootSet roots = root_set_from_entry(entry);
  const Window window;  // [-2,2]^2
  const double t0 = now_ms();

  auto count_hits = [&](Method m) {
    BasinOptions opt;
    opt.tol_residual = 1e-10;
    opt.max_iter = 100;
    const BasinGrid grid = basin_map(entry, m, opt, window, 101, 101, roots);
    int hits = 0;
    for (const BasinCell& cell : grid.cells) hits += cell.root_id == 1;
    return hits;
  };
  const int newton = count_hits(Method::newton);
  const int cn = count_hits(Method::cn);
  const int qcn = count_hits(Method::qcn);
  const double elapsed = now_ms() - t0;

  const bool ok = newton < cn && cn <= qcn && elapsed < 10000.0;
  report(5, "easom 101x101 basin ordering", ok,
         fmt("cells reaching (0,0) of 10201: newton %d < cn %d <= qcn %d; %.0f ms", newton,
             cn, qcn, elapsed));
}

// ---------------------------------------------------------------------------
// 6. Empirical convergence orders on x^3 - 1 over 20 starts in [1.2, 1.5].

void check_6() {
  const ScalarProblem<double> p = make_cubic_unity_real();
  auto orders = [&](Method m) {
    std::vector<double> out;
    for (int k = 0; k < 20; ++k) {
      const double x0 = 1.2 + 0.3 * k / 19.0;
      SolverConfig<double> cfg;
      cfg.method = m;
      cfg.tol_residual = 1e-13;
      cfg.max_iter = 100;
      try {
        out.push_back(order_estimate(solve_scalar(p, x0, cfg), 1.0));
      } catch (const InsufficientData&) {
      }
    }
    return out;
  };
  const std::vector<double> newton = orders(Method::newton);
  const std::vector<double> cn = orders(Method::cn);

  const bool enough = newton.size() >= 15 && cn.size() >= 15;
  const double mn = enough ? median(newton) : 0.0;
  const double mc = enough ? median(cn) : 0.0;
  const bool ok = enough && mn >= 1.8 && mn <= 2.2 && mc >= 2.7 && mc <= 3.3;
  report(6, "empirical orders on cubic_unity_real", ok,
         fmt("median order over %zu/%zu usable starts: newton %.4f (want 1.8..2.2), cn %.4f "
             "(want 2.7..3.3)",
             newton.size(), cn.size(), mn, mc));
}

// ---------------------------------------------------------------------------
// 7. Algebraic identities between the step rules.

void check_7() {
  std::string detail;
  bool ok = true;

  // 7a: every method solves an affine residual in exactly one step.
  {
    ScalarProblem<double> p;
    p.r = [](double x) { return 3.0 * x - 7.0; };
    p.dr = [](double) { return 3.0; };
    p.d2r = [](double) { return 0.0; };
    testsup::Probe probe(20260822);
    int bad = 0;
    for (const Method m : {Method::newton, Method::cn, Method::halley_alt, Method::en})
      for (int k = 0; k < 50; ++k) {
        const double x0 = probe.in(-10.0, 10.0);
        SolverConfig<double> cfg;
        cfg.method = m;
        cfg.tol_residual = 1e-9;
        // A probe O(1) away from x0 keeps r(x0) - r(c) well away from the
        // cancellation floor; the near-coincident default would smear the
        // one-step landing to ~1e-9.
        if (m == Method::en) cfg.c = x0 + 1.0;
        const auto tr = solve_scalar(p, x0, cfg);
        if (tr.status != SolveStatus::converged || tr.iterations_used != 1) ++bad;
      }
    ok = ok && bad == 0;
    detail += fmt("affine one-step misses %d/200; ", bad);
  }

  // 7b: en lands on the root in one step when r(c) = 0, up to rounding of
  // -(x-c)*r/r (error budget scales with the step length).
  {
    ScalarProblem<double> p;
    p.r = [](double x) { return x * x - 4.0; };
    p.dr = [](double x) { return 2.0 * x; };
    const double r_c = p.r(2.0);  // exactly 0
    testsup::Probe probe(7);
    int bad = 0;
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const double x0 = probe.in(-10.0, 10.0);
      if (std::abs(x0 - 2.0) < 1e-3 || std::abs(x0 + 2.0) < 1e-3) continue;
      const double dx = en_step(p, x0, 2.0, r_c);
      const double err = std::abs(x0 + dx - 2.0);
      // Two roundings inside the step plus the final addition near x = 2.
      const double budget =
          4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x0 - 2.0));
      worst = std::max(worst, err / budget);
      if (err > budget) ++bad;
    }
    ok = ok && bad == 0;
    detail += fmt("en one-step (r(c)=0) misses %d, worst %.2fx budget; ", bad, worst);
  }

  // 7c: cn equals the textbook -2 r r' / (2 r'^2 - r r'') form to a few ulps
  // away from the correction's zero set.
  {
    const ScalarProblem<double> p = make_cubic_unity_real();
    testsup::Probe probe(99);
    std::uint64_t worst = 0;
    int tested = 0;
    for (int k = 0; k < 1000; ++k) {
      const double x = probe.in(1.2, 3.0);
      const double r = p.r(x), d = p.dr(x), d2 = p.d2r(x);
      const double t = r * d2 / (2.0 * d * d);
      if (std::abs(1.0 - t) < 0.05) continue;
      const double classical = -2.0 * r * d / (2.0 * d * d - r * d2);
      worst = std::max(worst, testsup::ulp_distance(cn_step(p, x), classical));
      ++tested;
    }
    ok = ok && tested > 900 && worst <= 6;
    detail += fmt("cn vs textbook halley: worst %llu ulp over %d probes; ",
                  static_cast<unsigned long long>(worst), tested);
  }

  // 7d: for m = 1 the qcn assembly reduces to the scalar cn step.
  {
    const ScalarProblem<double> s = make_cubic_unity_real();
    VectorProblem v;
    v.m = 1;
    v.residual = [&](const std::vector<double>& x) { return std::vector<double>{s.r(x[0])}; };
    v.jacobian = [&](const std::vector<double>& x) {
      Matrix j(1, 1);
      j(0, 0) = s.dr(x[0]);
      return j;
    };
    v.second = [&](const std::vector<double>& x) {
      Tensor3 t(1);
      t(0, 0, 0) = s.d2r(x[0]);
      return t;
    };
    testsup::Probe probe(4242);
    std::uint64_t worst = 0;
    int tested = 0;
    for (int k = 0; k < 1000; ++k) {
      const double x = probe.in(1.2, 3.0);
      const double t = s.r(x) * s.d2r(x) / (2.0 * s.dr(x) * s.dr(x));
      if (std::abs(1.0 - t) < 0.05) continue;
      const double dq = qcn_step_multi(v, {x})[0];
      worst = std::max(worst, testsup::ulp_distance(dq, cn_step(s, x)));
      ++tested;
    }
    ok = ok && tested > 900 && worst <= 8;
    detail += fmt("qcn(m=1) vs cn: worst %llu ulp over %d probes",
                  static_cast<unsigned long long>(worst), tested);
  }

  report(7, "step-rule identities", ok, detail);
}

// ---------------------------------------------------------------------------
// 8. Analytic derivatives agree with finite differences.

void check_8() {
  auto fd_jacobian = [](const VectorProblem& p, const std::vector<double>& x) {
    Matrix j(p.m, p.m);
    for (int col = 0; col < p.m; ++col) {
      const double h = 1e-6 * (1.0 + std::abs(x[col]));
      std::vector<double> xp = x, xm = x;
      xp[col] += h;
      xm[col] -= h;
      const auto rp = p.residual(xp), rm = p.residual(xm);
      for (int row = 0; row < p.m; ++row) j(row, col) = (rp[row] - rm[row]) / (2.0 * h);
    }
    return j;
  };

  double worst_jac = 0.0, worst_full = 0.0, worst_diag = 0.0;
  testsup::Probe probe(8);
  for (const char* spec : {"two_spring:H=500", "easom"}) {
    const VectorProblem p = parse_problem_spec(spec).vector();
    for (int k = 0; k < 25; ++k) {
      std::vector<double> x(p.m);
      for (double& xi : x) xi = probe.in(-1.5, 1.5);

      const Matrix ja = p.jacobian(x);
      const Matrix jf = fd_jacobian(p, x);
      for (int i = 0; i < p.m; ++i)
        for (int j = 0; j < p.m; ++j) worst_jac = std::max(worst_jac, std::abs(ja(i, j) - jf(i, j)));

      const Tensor3 ta = p.second(x);
      const Tensor3 tf = fd_second_full(p, x);
      for (int i = 0; i < p.m; ++i)
        for (int j = 0; j < p.m; ++j)
          for (int l = 0; l < p.m; ++l)
            worst_full = std::max(worst_full, std::abs(ta(i, j, l) - tf(i, j, l)));

      const Matrix sd = fd_second_diagonal(p, x);
      for (int i = 0; i < p.m; ++i)
        for (int j = 0; j < p.m; ++j)
          worst_diag = std::max(worst_diag, std::abs(sd(i, j) - ta(i, j, i)));
    }
  }
  const bool ok = worst_jac <= 1e-5 && worst_full <= 1e-4 && worst_diag <= 1e-4;
  report(8, "finite differences vs analytic derivatives", ok,
         fmt("max |analytic - fd|: jacobian %.2e (<=1e-5), full second tensor %.2e (<=1e-4), "
             "diagonal slice %.2e (<=1e-4)",
             worst_jac, worst_full, worst_diag));
}

// ---------------------------------------------------------------------------
// 9. z^3 - 1 basins: classification coverage and boundary dimensions.

std::map<std::string, double> dims_baseline(const std::string& path) {
  std::ifstream f(path);
  std::map<std::string, double> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("method,", 0) == 0) continue;
    std::istringstream ss(line);
    std::string method, value;
    std::getline(ss, method, ',');
    std::getline(ss, value, ',');
    out[method] = std::stod(value);
  }
  return out;
}

void check_9() {
  const CatalogEntry entry = parse_problem_spec("cubic_unity");
  const RootSet roots = root_set_from_entry(entry);
  const Window window;  // [-2,2]^2
  const cplx probe_c(-0.65, -0.65);

  BasinOptions newton_opt;
  newton_opt.tol_residual = 1e-10;
  newton_opt.max_iter = 100;
  BasinOptions en_opt = newton_opt;
  en_opt.c = probe_c;

  // Coverage at 256 x 256.
  const BasinGrid nt256 = basin_map(entry, Method::newton, newton_opt, window, 256, 256, roots);
  int classified = 0;
  for (const BasinCell& cell : nt256.cells) classified += cell.root_id > 0;
  const bool coverage_ok = classified >= static_cast<int>(0.99 * 256 * 256);

  // The en probe drags the majority of the window to the root nearest c.
  int nearest = 1;
  double best = 1e300;
  for (size_t k = 0; k < roots.roots.size(); ++k) {
    const double d = std::hypot(roots.roots[k][0] - probe_c.real(),
                                roots.roots[k][1] - probe_c.imag());
    if (d < best) {
      best = d;
      nearest = static_cast<int>(k) + 1;
    }
  }
  const BasinGrid en256 = basin_map(entry, Method::en, en_opt, window, 256, 256, roots);
  int to_nearest = 0;
  for (const BasinCell& cell : en256.cells) to_nearest += cell.root_id == nearest;
  const bool majority_ok = to_nearest > 256 * 256 / 2;

  // Boundary dimensions at 512 x 512 against the committed values.
  BasinOptions cn_opt = newton_opt;
  const double dim_newton = box_counting_dimension(
      basin_map(entry, Method::newton, newton_opt, window, 512, 512, roots));
  const double dim_en =
      box_counting_dimension(basin_map(entry, Method::en, en_opt, window, 512, 512, roots));
  const double dim_cn =
      box_counting_dimension(basin_map(entry, Method::cn, cn_opt, window, 512, 512, roots));

  auto baseline = dims_baseline(std::string(BASELINE_DIR) + "/fractal_dims.csv");
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  const bool dims_ok = dim_en > 1.0 && dim_en < 2.0 && dim_cn > 1.0 && dim_cn < 2.0 &&
                       close(dim_newton, baseline["newton"]) && close(dim_en, baseline["en"]) &&
                       close(dim_cn, baseline["cn"]);

  report(9, "cubic_unity basin structure", coverage_ok && majority_ok && dims_ok,
         fmt("newton classifies %d/65536 cells; en(c=-0.65-0.65i) sends %d/65536 to root %d; "
             "boundary dims newton %.6f en %.6f cn %.6f vs committed table",
             classified, to_nearest, nearest, dim_newton, dim_en, dim_cn));
  warn(9, "smoothing effect on boundary dimension",
       dim_en <= dim_newton && dim_cn <= dim_newton,
       fmt("expected en/cn boundary no rougher than newton: %.4f / %.4f vs %.4f", dim_en,
           dim_cn, dim_newton));
}

}  // namespace

int main() {
  check_1();
  check_2();
  check_3();
  check_4();
  check_5();
  check_6();
  check_7();
  check_8();
  check_9();
  std::printf("%d of 9 checks passed, %d failed, %d warning(s)\n", 9 - g_failures, g_failures,
              g_warnings);
  return g_failures;
}
