#include "rootbeyond/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

namespace rootbeyond {

std::vector<SweepRow> sweep_initial_guess(const CatalogEntry& entry, Method method,
                                          const SolverConfig<double>& cfg,
                                          const std::vector<double>& x0_values) {
  if (entry.kind() != ProblemKind::scalar_real)
    throw std::invalid_argument("sweep_initial_guess needs a real scalar problem");
  SolverConfig<double> run_cfg = cfg;
  run_cfg.method = method;
  std::vector<SweepRow> rows;
  rows.reserve(x0_values.size());
  for (double x0 : x0_values) {
    const IterationTrace<double> t = solve_scalar(entry.scalar_real(), x0, run_cfg);
    SweepRow row;
    row.value = x0;
    row.status = t.status;
    row.iterations = t.status == SolveStatus::converged ? t.iterations_used : kNotConverged;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> sweep_parameter_h(Method method, const SolverConfig<double>& cfg,
                                        const std::vector<double>& h_values, double x0) {
  SolverConfig<double> run_cfg = cfg;
  run_cfg.method = method;
  std::vector<SweepRow> rows;
  rows.reserve(h_values.size());
  for (double h : h_values) {
    const ScalarProblem<double> p = make_exp_h(h);
    const IterationTrace<double> t = solve_scalar(p, x0, run_cfg);
    SweepRow row;
    row.value = h;
    row.status = t.status;
    row.iterations = t.status == SolveStatus::converged ? t.iterations_used : kNotConverged;
    rows.push_back(row);
  }
  return rows;
}

RootSet make_root_set(std::vector<std::array<double, 2>> roots, double match_tol) {
  if (match_tol <= 0) throw std::invalid_argument("match_tol must be > 0");
  for (size_t a = 0; a < roots.size(); ++a)
    for (size_t b = a + 1; b < roots.size(); ++b) {
      const double dx = roots[a][0] - roots[b][0];
      const double dy = roots[a][1] - roots[b][1];
      if (std::sqrt(dx * dx + dy * dy) <= 2.0 * match_tol)
        throw std::invalid_argument("root set has entries closer than 2 * match_tol");
    }
  RootSet rs;
  rs.roots = std::move(roots);
  rs.match_tol = match_tol;
  return rs;
}

RootSet root_set_from_entry(const CatalogEntry& entry, double match_tol) {
  std::vector<std::array<double, 2>> pts;
  switch (entry.kind()) {
    case ProblemKind::scalar_complex:
      for (const auto& z : entry.scalar_complex().known_roots) pts.push_back({z.real(), z.imag()});
      break;
    case ProblemKind::vector:
      if (entry.vector().m != 2)
        throw std::invalid_argument("root_set_from_entry: only 2d systems map to the plane");
      for (const auto& r : entry.vector().known_roots) pts.push_back({r[0], r[1]});
      break;
    case ProblemKind::scalar_real:
      for (double r : entry.scalar_real().known_roots) pts.push_back({r, 0.0});
      break;
  }
  return make_root_set(std::move(pts), match_tol);
}

int classify_root(const std::array<double, 2>& x, const RootSet& roots) {
  for (size_t k = 0; k < roots.roots.size(); ++k) {
    const double dx = x[0] - roots.roots[k][0];
    const double dy = x[1] - roots.roots[k][1];
    if (std::sqrt(dx * dx + dy * dy) <= roots.match_tol) return static_cast<int>(k) + 1;
  }
  return 0;
}

int classify_root(std::complex<double> z, const RootSet& roots) {
  return classify_root(std::array<double, 2>{z.real(), z.imag()}, roots);
}

namespace {

BasinCell solve_cell_complex(const ScalarProblem<std::complex<double>>& p,
                             std::complex<double> z0, Method method,
                             const SolverConfig<std::complex<double>>& cfg, const RootSet& roots) {
  (void)method;
  const IterationTrace<std::complex<double>> t = solve_scalar(p, z0, cfg);
  BasinCell cell;
  if (t.status == SolveStatus::converged) {
    cell.iterations = t.iterations_used;
    cell.root_id = classify_root(t.iterates.back(), roots);
  } else {
    cell.iterations = cfg.max_iter + 1;
    cell.root_id = 0;
  }
  return cell;
}

BasinCell solve_cell_vector(const VectorProblem& p, const std::vector<double>& x0,
                            const VectorSolverConfig& cfg, const RootSet& roots) {
  const VectorTrace t = solve_vector(p, x0, cfg);
  BasinCell cell;
  if (t.status == SolveStatus::converged) {
    cell.iterations = t.iterations_used;
    const std::vector<double>& last = t.iterates.back();
    cell.root_id = classify_root(std::array<double, 2>{last[0], last[1]}, roots);
  } else {
    cell.iterations = cfg.max_iter + 1;
    cell.root_id = 0;
  }
  return cell;
}

void run_rows_parallel(int ny, int threads, const std::function<void(int)>& run_row) {
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  n = std::min(n, ny);
  if (n <= 1) {
    for (int j = 0; j < ny; ++j) run_row(j);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int j = next.fetch_add(1);
        if (j >= ny) return;
        run_row(j);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace

BasinGrid basin_map(const CatalogEntry& entry, Method method, const BasinOptions& opt,
                    const Window& window, int nx, int ny, const RootSet& roots) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("basin_map: resolution must be >= 1");
  if (!(window.x1 > window.x0) || !(window.y1 > window.y0))
    throw std::invalid_argument("basin_map: empty window");

  BasinGrid grid;
  grid.origin_x = window.x0;
  grid.origin_y = window.y0;
  grid.spacing_x = (window.x1 - window.x0) / nx;
  grid.spacing_y = (window.y1 - window.y0) / ny;
  grid.nx = nx;
  grid.ny = ny;
  grid.max_iter = opt.max_iter;
  grid.cells.assign(static_cast<size_t>(nx) * ny, BasinCell{});

  if (entry.kind() == ProblemKind::scalar_complex) {
    const ScalarProblem<std::complex<double>>& p = entry.scalar_complex();
    SolverConfig<std::complex<double>> cfg;
    cfg.method = method;
    cfg.tol_residual = opt.tol_residual;
    cfg.max_iter = opt.max_iter;
    if (method == Method::en) {
      if (!opt.c) throw std::invalid_argument("basin_map: en needs a probe point c");
      cfg.c = *opt.c;
    }
    run_rows_parallel(ny, opt.threads, [&](int j) {
      for (int i = 0; i < nx; ++i) {
        const std::complex<double> z0(grid.cell_x(i), grid.cell_y(j));
        grid.at(i, j) = solve_cell_complex(p, z0, method, cfg, roots);
      }
    });
  } else if (entry.kind() == ProblemKind::vector) {
    const VectorProblem& p = entry.vector();
    if (p.m != 2) throw std::invalid_argument("basin_map: only 2d systems supported");
    VectorSolverConfig cfg;
    cfg.method = method;
    cfg.tol_residual = opt.tol_residual;
    cfg.max_iter = opt.max_iter;
    if (method == Method::en) {
      if (opt.c_vec.size() != 2) throw std::invalid_argument("basin_map: en needs a probe vector c");
      cfg.c = opt.c_vec;
    }
    run_rows_parallel(ny, opt.threads, [&](int j) {
      for (int i = 0; i < nx; ++i) {
        grid.at(i, j) = solve_cell_vector(p, {grid.cell_x(i), grid.cell_y(j)}, cfg, roots);
      }
    });
  } else {
    throw std::invalid_argument("basin_map: entry must be complex scalar or a 2d system");
  }
  return grid;
}

double box_counting_dimension(const BasinGrid& grid) {
  const int nx = grid.nx, ny = grid.ny;
  std::set<int> ids;
  for (const BasinCell& c : grid.cells)
    if (c.root_id > 0) ids.insert(c.root_id);
  if (ids.size() < 2)
    throw DegenerateGrid("box_counting_dimension: fewer than 2 distinct roots on the grid");

  // Boundary cells: converged cells with a converged 4-neighbor of another root.
  std::vector<char> boundary(static_cast<size_t>(nx) * ny, 0);
  auto id_at = [&](int i, int j) { return grid.at(i, j).root_id; };
  bool any = false;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int id = id_at(i, j);
      if (id <= 0) continue;
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int ii = i + di[k], jj = j + dj[k];
        if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
        const int nb = id_at(ii, jj);
        if (nb > 0 && nb != id) {
          boundary[static_cast<size_t>(j) * nx + i] = 1;
          any = true;
          break;
        }
      }
    }
  if (!any) return 0.0;

  std::vector<int> sizes;
  for (int e = 1; e <= std::min(nx, ny) / 4; e *= 2) sizes.push_back(e);
  if (sizes.size() < 2)
    throw std::invalid_argument("box_counting_dimension: grid too small for a fit");

  std::vector<double> xs, ys;
  for (int e : sizes) {
    const int gx = (nx + e - 1) / e, gy = (ny + e - 1) / e;
    long count = 0;
    for (int bj = 0; bj < gy; ++bj)
      for (int bi = 0; bi < gx; ++bi) {
        bool occupied = false;
        for (int j = bj * e; j < std::min((bj + 1) * e, ny) && !occupied; ++j)
          for (int i = bi * e; i < std::min((bi + 1) * e, nx); ++i)
            if (boundary[static_cast<size_t>(j) * nx + i]) {
              occupied = true;
              break;
            }
        if (occupied) ++count;
      }
    xs.push_back(std::log(1.0 / e));
    ys.push_back(std::log(static_cast<double>(count)));
  }

  double mx = 0, my = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  return sxy / sxx;
}

double order_from_errors(const std::vector<double>& errors, SolveStatus status) {
  if (status != SolveStatus::converged)
    throw InsufficientData("order estimate needs a converged trace");
  if (errors.size() < 4) throw InsufficientData("order estimate needs at least 4 iterates");
  const double floor = 100.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> xs, ys;
  for (size_t n = 0; n + 1 < errors.size(); ++n) {
    if (errors[n] > floor && errors[n + 1] > floor) {
      xs.push_back(std::log(errors[n]));
      ys.push_back(std::log(errors[n + 1]));
    }
  }
  if (xs.size() < 2) throw InsufficientData("order estimate needs at least 2 usable pairs");
  double mx = 0, my = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx == 0.0) throw InsufficientData("order estimate: degenerate error sequence");
  return sxy / sxx;
}

double order_estimate(const IterationTrace<double>& trace, double root) {
  std::vector<double> errors;
  errors.reserve(trace.iterates.size());
  for (double x : trace.iterates) errors.push_back(std::abs(x - root));
  return order_from_errors(errors, trace.status);
}

double order_estimate(const IterationTrace<std::complex<double>>& trace,
                      std::complex<double> root) {
  std::vector<double> errors;
  errors.reserve(trace.iterates.size());
  for (const auto& x : trace.iterates) errors.push_back(std::abs(x - root));
  return order_from_errors(errors, trace.status);
}

double order_estimate(const VectorTrace& trace, const std::vector<double>& root) {
  std::vector<double> errors;
  errors.reserve(trace.iterates.size());
  for (const auto& x : trace.iterates) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += (x[i] - root[i]) * (x[i] - root[i]);
    errors.push_back(std::sqrt(s));
  }
  return order_from_errors(errors, trace.status);
}

}  // namespace rootbeyond
