// Experiment harness: parameter sweeps, basin-of-attraction grids, box
// counting and empirical convergence order.
#ifndef ROOTBEYOND_EXPERIMENTS_HPP
#define ROOTBEYOND_EXPERIMENTS_HPP

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "rootbeyond/problems.hpp"

namespace rootbeyond {

inline constexpr int kNotConverged = -1;  // iteration sentinel in sweep rows

struct SweepRow {
  double value = 0.0;  // swept quantity (x0 or H)
  int iterations = kNotConverged;
  SolveStatus status = SolveStatus::max_iter;
};

// Runs the scalar solver from each x0; entry must be a real scalar problem.
std::vector<SweepRow> sweep_initial_guess(const CatalogEntry& entry, Method method,
                                          const SolverConfig<double>& cfg,
                                          const std::vector<double>& x0_values);

// Runs the solver on e^x - H for each H from the fixed x0.
std::vector<SweepRow> sweep_parameter_h(Method method, const SolverConfig<double>& cfg,
                                        const std::vector<double>& h_values, double x0);

struct Window {
  double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0;
};

// Reference roots as points in the plane: (re, im) for complex problems,
// (x1, x2) for two-dimensional systems. Pairwise distances must exceed
// 2 * match_tol so that classification is unambiguous.
struct RootSet {
  std::vector<std::array<double, 2>> roots;
  double match_tol = 1e-6;
};

RootSet make_root_set(std::vector<std::array<double, 2>> roots, double match_tol = 1e-6);
RootSet root_set_from_entry(const CatalogEntry& entry, double match_tol = 1e-6);

// 1-based index of the root within match_tol of x, or 0 when none is.
int classify_root(const std::array<double, 2>& x, const RootSet& roots);
int classify_root(std::complex<double> z, const RootSet& roots);

struct BasinCell {
  int iterations = 0;  // > max_iter means the run did not converge
  int root_id = 0;     // 0 = no listed root matched
};

struct BasinGrid {
  double origin_x = 0.0, origin_y = 0.0;  // lower-left corner of the window
  double spacing_x = 0.0, spacing_y = 0.0;
  int nx = 0, ny = 0;
  int max_iter = 0;
  std::vector<BasinCell> cells;  // row-major, index j * nx + i, y ascending

  const BasinCell& at(int i, int j) const { return cells[static_cast<size_t>(j) * nx + i]; }
  BasinCell& at(int i, int j) { return cells[static_cast<size_t>(j) * nx + i]; }
  double cell_x(int i) const { return origin_x + (i + 0.5) * spacing_x; }
  double cell_y(int j) const { return origin_y + (j + 0.5) * spacing_y; }
};

struct BasinOptions {
  double tol_residual = 1e-10;
  int max_iter = 100;
  std::optional<std::complex<double>> c;  // extended-newton probe (complex problems)
  std::vector<double> c_vec;              // extended-newton probe (2d systems)
  int threads = 0;                        // 0 = all hardware threads
};

// Solves from every cell center and classifies the landing point. Cells are
// evaluated in parallel but always written by index, so the result does not
// depend on the thread count. Entry must be scalar_complex or a 2d system.
BasinGrid basin_map(const CatalogEntry& entry, Method method, const BasinOptions& opt,
                    const Window& window, int nx, int ny, const RootSet& roots);

// Box-counting dimension of the basin boundary (4-neighbor root_id
// disagreements between converged cells). Box sizes 1, 2, 4, ... up to
// min(nx, ny)/4; returns the log-log least-squares slope.
double box_counting_dimension(const BasinGrid& grid);

// Least-squares slope of log e_{n+1} vs log e_n over entries above
// 100 * machine epsilon. Throws InsufficientData when the trace did not
// converge or has fewer than 4 iterates / 2 usable pairs.
double order_from_errors(const std::vector<double>& errors, SolveStatus status);

double order_estimate(const IterationTrace<double>& trace, double root);
double order_estimate(const IterationTrace<std::complex<double>>& trace,
                      std::complex<double> root);
double order_estimate(const VectorTrace& trace, const std::vector<double>& root);

}  // namespace rootbeyond

#endif
