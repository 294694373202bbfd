// Dense multivariate versions of the scalar iterations.
//
// Per iteration each method assembles an m x m system and solves it:
//   newton  J dx = -r
//   en      per-row transform using a fixed probe vector c; row i compares
//           r_i(x) with r_i at x_ci (x with its i-th entry replaced by c_i)
//   cn      two solves: the newton step, then (J + 1/2 T . dxN) dx = -r
//   qcn     one solve using only the diagonal second-derivative slice r_{i,ji}
#ifndef ROOTBEYOND_VECTOR_HPP
#define ROOTBEYOND_VECTOR_HPP

#include <functional>
#include <vector>

#include "rootbeyond/common.hpp"
#include "rootbeyond/linalg.hpp"

namespace rootbeyond {

struct VectorProblem {
  int m = 0;
  std::function<std::vector<double>(const std::vector<double>&)> residual;
  std::function<Matrix(const std::vector<double>&)> jacobian;
  std::function<Tensor3(const std::vector<double>&)> second;  // may be empty
  // Optional single-component accessors; defaults evaluate the full
  // residual/jacobian and index into it.
  std::function<double(int, const std::vector<double>&)> residual_component;
  std::function<std::vector<double>(int, const std::vector<double>&)> jacobian_row;
  std::vector<std::vector<double>> known_roots;

  bool has_second() const { return static_cast<bool>(second); }
  double component(int i, const std::vector<double>& x) const {
    return residual_component ? residual_component(i, x) : residual(x)[i];
  }
  std::vector<double> jac_row(int i, const std::vector<double>& x) const {
    return jacobian_row ? jacobian_row(i, x) : jacobian(x).row(i);
  }
};

struct VectorSolverConfig {
  Method method = Method::newton;
  std::vector<double> c;  // extended-newton probe vector, fixed for the whole solve
  double tol_residual = 1e-12;
  double tol_step = 0.0;
  int max_iter = 100;
  double diverge_magnitude = 1e150;
  double fd_step_base = 1.4901161193847656e-08;  // sqrt(machine epsilon)
  double row_guard_eps = 1e-12;
};

struct VectorTrace {
  std::vector<std::vector<double>> iterates;
  std::vector<double> residual_norms;
  std::vector<double> errors;  // ||x* - xn|| vs nearest known root; empty if none known
  SolveStatus status = SolveStatus::max_iter;
  int iterations_used = 0;
  int fallback_rows = 0;   // en rows assembled as plain newton rows
  int fallback_steps = 0;  // whole steps that fell back to the newton update
};

// Filled in by the step functions when the caller wants fallback accounting.
struct VectorStepInfo {
  int fallback_rows = 0;
  bool fell_back_to_newton = false;
};

std::vector<double> newton_step_multi(const VectorProblem& p, const std::vector<double>& x);

std::vector<double> en_step_multi(const VectorProblem& p, const std::vector<double>& x,
                                  const std::vector<double>& c, double row_guard_eps = 1e-12,
                                  VectorStepInfo* info = nullptr);

std::vector<double> cn_step_multi(const VectorProblem& p, const std::vector<double>& x,
                                  double fd_step_base = 1.4901161193847656e-08,
                                  VectorStepInfo* info = nullptr);

std::vector<double> qcn_step_multi(const VectorProblem& p, const std::vector<double>& x,
                                   double fd_step_base = 1.4901161193847656e-08,
                                   VectorStepInfo* info = nullptr);

// Central difference of jacobian_row(i, .) along x_i: s(i,j) ~= d2 r_i / dx_j dx_i.
// Costs 2m row evaluations.
Matrix fd_second_diagonal(const VectorProblem& p, const std::vector<double>& x,
                          double fd_step_base = 1.4901161193847656e-08);

// Full central-difference tensor t(i,j,k) from 2m jacobian evaluations.
Tensor3 fd_second_full(const VectorProblem& p, const std::vector<double>& x,
                       double fd_step_base = 1.4901161193847656e-08);

VectorTrace solve_vector(const VectorProblem& p, const std::vector<double>& x0,
                         const VectorSolverConfig& cfg);

}  // namespace rootbeyond

#endif
