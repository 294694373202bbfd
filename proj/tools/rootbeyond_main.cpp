// Command-line front end: solves, sweeps, basin/fractal maps, box-counting
// dimension and convergence-order estimates. Exit codes: 0 success/converged,
// 2 non-converged or not estimable, 1 usage or I/O error.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rootbeyond/io.hpp"

namespace rb = rootbeyond;

namespace {

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    const size_t comma = s.find(',', pos);
    const std::string tok = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int env_threads() {
  const char* v = std::getenv("ROOTBEYOND_THREADS");
  if (!v || !*v) return 0;
  const long n = std::strtol(v, nullptr, 10);
  return n > 0 ? static_cast<int>(n) : 0;
}

class Timer {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

void echo(rb::RunManifest& m, const std::string& key, const std::string& value) {
  m.settings.emplace_back(key, value);
}

// ---- solve ---------------------------------------------------------------

void print_scalar_trace(std::ostream& os, const rb::IterationTrace<double>& t) {
  os << "n,x,abs_r,error\n";
  for (size_t n = 0; n < t.iterates.size(); ++n) {
    os << n << ',' << rb::format_g17(t.iterates[n]) << ','
       << rb::format_g17(t.residual_mags[n]);
    os << ',' << (n < t.errors.size() ? rb::format_g17(t.errors[n]) : "");
    os << '\n';
  }
}

void print_complex_trace(std::ostream& os, const rb::IterationTrace<std::complex<double>>& t) {
  os << "n,re,im,abs_r,error\n";
  for (size_t n = 0; n < t.iterates.size(); ++n) {
    os << n << ',' << rb::format_g17(t.iterates[n].real()) << ','
       << rb::format_g17(t.iterates[n].imag()) << ',' << rb::format_g17(t.residual_mags[n]);
    os << ',' << (n < t.errors.size() ? rb::format_g17(t.errors[n]) : "");
    os << '\n';
  }
}

void print_vector_trace(std::ostream& os, const rb::VectorTrace& t, size_t m) {
  os << "n";
  for (size_t i = 1; i <= m; ++i) os << ",x" << i;
  os << ",norm_r,error\n";
  for (size_t n = 0; n < t.iterates.size(); ++n) {
    os << n;
    for (size_t i = 0; i < m; ++i) os << ',' << rb::format_g17(t.iterates[n][i]);
    os << ',' << rb::format_g17(t.residual_norms[n]);
    os << ',' << (n < t.errors.size() ? rb::format_g17(t.errors[n]) : "");
    os << '\n';
  }
}

struct SolveResult {
  rb::SolveStatus status = rb::SolveStatus::max_iter;
  int iterations = 0;
  int fallback_steps = 0;
  std::string final_iterate;
  double final_residual = 0.0;
  std::optional<double> final_error;
  std::string trace_csv;  // the full per-iteration table
};

SolveResult run_solve(const rb::CatalogEntry& entry, rb::Method method,
                      const std::vector<double>& x0, const std::vector<double>& c, double tol,
                      int max_iter) {
  SolveResult res;
  std::ostringstream csv;
  if (entry.kind() == rb::ProblemKind::scalar_real) {
    if (x0.size() != 1) throw std::invalid_argument("--x0: expected a single value");
    rb::SolverConfig<double> cfg;
    cfg.method = method;
    cfg.tol_residual = tol;
    cfg.max_iter = max_iter;
    if (!c.empty()) {
      if (c.size() != 1) throw std::invalid_argument("--c: expected a single value");
      cfg.c = c[0];
    }
    const auto t = rb::solve_scalar(entry.scalar_real(), x0[0], cfg);
    print_scalar_trace(csv, t);
    res.status = t.status;
    res.iterations = t.iterations_used;
    res.fallback_steps = t.fallback_steps;
    res.final_iterate = rb::format_g17(t.iterates.back());
    res.final_residual = t.residual_mags.back();
    if (!t.errors.empty()) res.final_error = t.errors.back();
  } else if (entry.kind() == rb::ProblemKind::scalar_complex) {
    if (x0.empty() || x0.size() > 2)
      throw std::invalid_argument("--x0: expected re[,im] for a complex problem");
    rb::SolverConfig<std::complex<double>> cfg;
    cfg.method = method;
    cfg.tol_residual = tol;
    cfg.max_iter = max_iter;
    if (!c.empty()) {
      if (c.size() > 2) throw std::invalid_argument("--c: expected re[,im]");
      cfg.c = std::complex<double>(c[0], c.size() > 1 ? c[1] : 0.0);
    }
    const std::complex<double> z0(x0[0], x0.size() > 1 ? x0[1] : 0.0);
    const auto t = rb::solve_scalar(entry.scalar_complex(), z0, cfg);
    print_complex_trace(csv, t);
    res.status = t.status;
    res.iterations = t.iterations_used;
    res.fallback_steps = t.fallback_steps;
    res.final_iterate = rb::format_g17(t.iterates.back().real()) + "," +
                        rb::format_g17(t.iterates.back().imag());
    res.final_residual = t.residual_mags.back();
    if (!t.errors.empty()) res.final_error = t.errors.back();
  } else {
    const rb::VectorProblem& p = entry.vector();
    if (x0.size() != p.m)
      throw std::invalid_argument("--x0: expected " + std::to_string(p.m) + " components");
    rb::VectorSolverConfig cfg;
    cfg.method = method;
    cfg.tol_residual = tol;
    cfg.max_iter = max_iter;
    if (!c.empty()) {
      if (c.size() != p.m)
        throw std::invalid_argument("--c: expected " + std::to_string(p.m) + " components");
      cfg.c = c;
    }
    const auto t = rb::solve_vector(p, x0, cfg);
    print_vector_trace(csv, t, p.m);
    res.status = t.status;
    res.iterations = t.iterations_used;
    res.fallback_steps = t.fallback_steps;
    std::string fin;
    for (size_t i = 0; i < p.m; ++i) {
      if (i) fin += ',';
      fin += rb::format_g17(t.iterates.back()[i]);
    }
    res.final_iterate = fin;
    res.final_residual = t.residual_norms.back();
    if (!t.errors.empty()) res.final_error = t.errors.back();
  }
  res.trace_csv = csv.str();
  return res;
}

// Nearest catalog root to the final iterate, for order estimation.
template <typename K>
K nearest_root(const std::vector<K>& roots, K x) {
  K best = roots.front();
  double best_d = std::abs(x - best);
  for (const K& r : roots) {
    const double d = std::abs(x - r);
    if (d < best_d) {
      best_d = d;
      best = r;
    }
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"root-finding experiments: newton, extended newton (en), corrected newton (cn), "
               "quasi-corrected newton (qcn), halley-alt"};
  app.require_subcommand(1);

  // Shared flag storage; each subcommand registers the subset it uses.
  std::string problem_spec, method_name = "newton";
  std::string x0_str, c_str, window_str = "-2,2,-2,2", res_str = "256";
  std::string out_prefix, grid_path, x0_range_str, h_values_str;
  double tol = 1e-12;
  double grid_tol = 1e-10;
  int max_iter = 100;

  auto add_common = [&](CLI::App* sub, bool needs_problem) {
    auto* p = sub->add_option("--problem", problem_spec,
                              "problem name, optionally with parameters (name:key=value,...)");
    if (needs_problem) p->required();
    sub->add_option("--method", method_name, "newton|en|cn|qcn|halley-alt");
    sub->add_option("--c", c_str, "extended-newton probe point (comma-separated components)");
    sub->add_option("--max-iter", max_iter, "iteration cap");
    sub->add_option("--out-prefix", out_prefix, "write output files with this path prefix");
  };

  CLI::App* solve = app.add_subcommand("solve", "run one solve and print the iteration trace");
  add_common(solve, true);
  solve->add_option("--x0", x0_str, "initial guess (comma-separated components)")->required();
  solve->add_option("--tol", tol, "residual tolerance");

  CLI::App* sweep = app.add_subcommand("sweep", "iteration counts over a range of x0 or H");
  add_common(sweep, false);
  sweep->add_option("--x0", x0_str, "fixed initial guess for the H sweep");
  sweep->add_option("--tol", tol, "residual tolerance");
  sweep->add_option("--x0-range", x0_range_str, "lo,hi,count — sweep the initial guess");
  sweep->add_option("--h-values", h_values_str, "comma-separated H values for e^x - H");

  CLI::App* basin = app.add_subcommand("basin", "basin-of-attraction map for a 2d system");
  add_common(basin, false);
  basin->add_option("--window", window_str, "x0,x1,y0,y1");
  basin->add_option("--res", res_str, "grid resolution: n or nx,ny");
  basin->add_option("--tol", grid_tol, "residual tolerance for grid solves");

  CLI::App* fractal =
      app.add_subcommand("fractal", "basin map over the complex plane (same outputs as basin)");
  add_common(fractal, false);
  fractal->add_option("--window", window_str, "x0,x1,y0,y1");
  fractal->add_option("--res", res_str, "grid resolution: n or nx,ny");
  fractal->add_option("--tol", grid_tol, "residual tolerance for grid solves");

  CLI::App* boxdim = app.add_subcommand("boxdim", "box-counting dimension of a saved grid");
  boxdim->add_option("--grid", grid_path, "grid CSV written by basin/fractal")->required();

  CLI::App* order = app.add_subcommand("order", "empirical convergence order of one solve");
  add_common(order, true);
  order->add_option("--x0", x0_str, "initial guess (comma-separated components)")->required();
  order->add_option("--tol", tol, "residual tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const Timer timer;
  try {
    const std::optional<rb::Method> parsed_method = rb::method_from_name(method_name);
    if (!parsed_method) throw std::invalid_argument("--method: unknown method " + method_name);
    const rb::Method method = *parsed_method;
    const std::vector<double> c =
        c_str.empty() ? std::vector<double>{} : parse_list(c_str, "--c");

    if (app.got_subcommand(solve)) {
      const rb::CatalogEntry entry = rb::parse_problem_spec(problem_spec);
      const SolveResult res =
          run_solve(entry, method, parse_list(x0_str, "--x0"), c, tol, max_iter);
      if (out_prefix.empty()) std::cout << res.trace_csv;
      std::cout << "status: " << rb::status_name(res.status) << '\n'
                << "iterations: " << res.iterations << '\n';
      if (res.fallback_steps > 0) std::cout << "fallback_steps: " << res.fallback_steps << '\n';
      std::cout << "final: " << res.final_iterate << '\n'
                << "residual: " << rb::format_g17(res.final_residual) << '\n';
      if (res.final_error) std::cout << "error: " << rb::format_g17(*res.final_error) << '\n';
      if (!out_prefix.empty()) {
        const std::string trace_path = out_prefix + "_trace.csv";
        std::ofstream f(trace_path);
        if (!f) throw std::runtime_error("cannot open for writing: " + trace_path);
        f << res.trace_csv;
        rb::RunManifest man;
        man.subcommand = "solve";
        man.problem = problem_spec;
        man.method = rb::method_name(method);
        echo(man, "x0", x0_str);
        if (!c_str.empty()) echo(man, "c", c_str);
        echo(man, "tol", rb::format_g17(tol));
        echo(man, "max_iter", std::to_string(max_iter));
        man.outputs.push_back(trace_path);
        man.wall_time_ms = timer.ms();
        rb::write_manifest(out_prefix + "_manifest.txt", man);
      }
      return res.status == rb::SolveStatus::converged ? 0 : 2;
    }

    if (app.got_subcommand(sweep)) {
      if (x0_range_str.empty() == h_values_str.empty())
        throw std::invalid_argument("sweep needs exactly one of --x0-range / --h-values");
      rb::SolverConfig<double> cfg;
      cfg.method = method;
      cfg.tol_residual = tol;
      cfg.max_iter = max_iter;
      if (!c.empty()) {
        if (c.size() != 1) throw std::invalid_argument("--c: expected a single value");
        cfg.c = c[0];
      }
      std::vector<rb::SweepRow> rows;
      std::string value_name;
      if (!x0_range_str.empty()) {
        if (problem_spec.empty()) throw std::invalid_argument("--x0-range needs --problem");
        const std::vector<double> spec = parse_list(x0_range_str, "--x0-range");
        if (spec.size() != 3 || spec[2] < 1 || spec[2] != std::floor(spec[2]))
          throw std::invalid_argument("--x0-range: expected lo,hi,count");
        const int count = static_cast<int>(spec[2]);
        std::vector<double> xs;
        for (int i = 0; i < count; ++i)
          xs.push_back(count == 1 ? spec[0] : spec[0] + i * (spec[1] - spec[0]) / (count - 1));
        rows = rb::sweep_initial_guess(rb::parse_problem_spec(problem_spec), method, cfg, xs);
        value_name = "x0";
      } else {
        const std::vector<double> hs = parse_list(h_values_str, "--h-values");
        const std::vector<double> x0 =
            x0_str.empty() ? std::vector<double>{0.0} : parse_list(x0_str, "--x0");
        if (x0.size() != 1) throw std::invalid_argument("--x0: expected a single value");
        rows = rb::sweep_parameter_h(method, cfg, hs, x0[0]);
        value_name = "H";
      }
      std::cout << value_name << ",iterations,status\n";
      for (const auto& r : rows)
        std::cout << rb::format_g17(r.value) << ',' << r.iterations << ','
                  << rb::status_name(r.status) << '\n';
      if (!out_prefix.empty()) {
        const std::string sweep_path = out_prefix + "_sweep.csv";
        rb::write_sweep_csv(sweep_path, value_name, rows);
        rb::RunManifest man;
        man.subcommand = "sweep";
        man.problem = problem_spec;
        man.method = rb::method_name(method);
        if (!x0_range_str.empty()) echo(man, "x0_range", x0_range_str);
        if (!h_values_str.empty()) echo(man, "h_values", h_values_str);
        if (!x0_str.empty()) echo(man, "x0", x0_str);
        if (!c_str.empty()) echo(man, "c", c_str);
        echo(man, "tol", rb::format_g17(tol));
        echo(man, "max_iter", std::to_string(max_iter));
        man.outputs.push_back(sweep_path);
        man.wall_time_ms = timer.ms();
        rb::write_manifest(out_prefix + "_manifest.txt", man);
      }
      return 0;
    }

    if (app.got_subcommand(basin) || app.got_subcommand(fractal)) {
      if (out_prefix.empty()) throw std::invalid_argument("basin/fractal need --out-prefix");
      if (problem_spec.empty())
        problem_spec = app.got_subcommand(fractal) ? "cubic_unity" : "easom";
      const rb::CatalogEntry entry = rb::parse_problem_spec(problem_spec);
      const std::vector<double> win = parse_list(window_str, "--window");
      if (win.size() != 4) throw std::invalid_argument("--window: expected x0,x1,y0,y1");
      const std::vector<double> res = parse_list(res_str, "--res");
      if (res.empty() || res.size() > 2) throw std::invalid_argument("--res: expected n or nx,ny");
      const int nx = static_cast<int>(res[0]);
      const int ny = static_cast<int>(res.size() > 1 ? res[1] : res[0]);

      rb::BasinOptions opt;
      opt.tol_residual = grid_tol;
      opt.max_iter = max_iter;
      opt.threads = env_threads();
      if (!c.empty()) {
        if (entry.kind() == rb::ProblemKind::scalar_complex) {
          if (c.size() > 2) throw std::invalid_argument("--c: expected re[,im]");
          opt.c = std::complex<double>(c[0], c.size() > 1 ? c[1] : 0.0);
        } else {
          opt.c_vec = c;
        }
      }
      const rb::RootSet roots = rb::root_set_from_entry(entry);
      const rb::Window window{win[0], win[1], win[2], win[3]};
      const rb::BasinGrid grid = rb::basin_map(entry, method, opt, window, nx, ny, roots);

      std::vector<long> counts(roots.roots.size() + 1, 0);
      for (const auto& cell : grid.cells) ++counts[cell.root_id];
      long converged = 0;
      for (size_t k = 1; k < counts.size(); ++k) converged += counts[k];
      std::cout << "cells: " << grid.cells.size() << '\n'
                << "converged_to_listed_root: " << converged << '\n';
      for (size_t k = 1; k < counts.size(); ++k)
        std::cout << "root_" << k << ": " << counts[k] << '\n';
      std::cout << "unclassified: " << counts[0] << '\n';

      const std::string csv_path = out_prefix + "_grid.csv";
      const std::string pgm_path = out_prefix + "_iterations.pgm";
      const std::string ppm_path = out_prefix + "_roots.ppm";
      rb::write_grid_csv(csv_path, grid);
      rb::write_pgm(pgm_path, grid);
      rb::write_ppm(ppm_path, grid);
      rb::RunManifest man;
      man.subcommand = app.got_subcommand(fractal) ? "fractal" : "basin";
      man.problem = problem_spec;
      man.method = rb::method_name(method);
      echo(man, "window", window_str);
      echo(man, "res", std::to_string(nx) + "," + std::to_string(ny));
      echo(man, "tol", rb::format_g17(grid_tol));
      echo(man, "max_iter", std::to_string(max_iter));
      if (!c_str.empty()) echo(man, "c", c_str);
      echo(man, "threads", std::to_string(opt.threads));
      man.outputs = {csv_path, pgm_path, ppm_path};
      man.wall_time_ms = timer.ms();
      rb::write_manifest(out_prefix + "_manifest.txt", man);
      return 0;
    }

    if (app.got_subcommand(boxdim)) {
      const rb::BasinGrid grid = rb::read_grid_csv(grid_path);
      std::cout << "dimension: " << rb::format_g17(rb::box_counting_dimension(grid)) << '\n';
      return 0;
    }

    if (app.got_subcommand(order)) {
      const rb::CatalogEntry entry = rb::parse_problem_spec(problem_spec);
      const std::vector<double> x0 = parse_list(x0_str, "--x0");
      double value = 0.0;
      if (entry.kind() == rb::ProblemKind::scalar_real) {
        if (x0.size() != 1) throw std::invalid_argument("--x0: expected a single value");
        rb::SolverConfig<double> cfg;
        cfg.method = method;
        cfg.tol_residual = tol;
        cfg.max_iter = max_iter;
        if (!c.empty()) cfg.c = c[0];
        const auto t = rb::solve_scalar(entry.scalar_real(), x0[0], cfg);
        const auto& roots = entry.scalar_real().known_roots;
        if (roots.empty()) throw rb::InsufficientData("problem has no reference roots");
        value = rb::order_estimate(t, nearest_root(roots, t.iterates.back()));
      } else if (entry.kind() == rb::ProblemKind::scalar_complex) {
        rb::SolverConfig<std::complex<double>> cfg;
        cfg.method = method;
        cfg.tol_residual = tol;
        cfg.max_iter = max_iter;
        if (!c.empty()) cfg.c = std::complex<double>(c[0], c.size() > 1 ? c[1] : 0.0);
        const std::complex<double> z0(x0[0], x0.size() > 1 ? x0[1] : 0.0);
        const auto t = rb::solve_scalar(entry.scalar_complex(), z0, cfg);
        const auto& roots = entry.scalar_complex().known_roots;
        if (roots.empty()) throw rb::InsufficientData("problem has no reference roots");
        value = rb::order_estimate(t, nearest_root(roots, t.iterates.back()));
      } else {
        const rb::VectorProblem& p = entry.vector();
        if (x0.size() != p.m)
          throw std::invalid_argument("--x0: expected " + std::to_string(p.m) + " components");
        rb::VectorSolverConfig cfg;
        cfg.method = method;
        cfg.tol_residual = tol;
        cfg.max_iter = max_iter;
        if (!c.empty()) cfg.c = c;
        const auto t = rb::solve_vector(p, x0, cfg);
        if (p.known_roots.empty()) throw rb::InsufficientData("problem has no reference roots");
        size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < p.known_roots.size(); ++k) {
          double s = 0.0;
          for (size_t i = 0; i < p.m; ++i) {
            const double d = t.iterates.back()[i] - p.known_roots[k][i];
            s += d * d;
          }
          if (s < best_d) {
            best_d = s;
            best = k;
          }
        }
        value = rb::order_estimate(t, p.known_roots[best]);
      }
      std::cout << "order: " << rb::format_g17(value) << '\n';
      return 0;
    }
  } catch (const rb::InsufficientData& e) {
    std::cerr << "not estimable: " << e.what() << '\n';
    return 2;
  } catch (const rb::DegenerateGrid& e) {
    std::cerr << "degenerate grid: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
