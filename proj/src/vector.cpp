#include "rootbeyond/vector.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rootbeyond {

namespace {

void check_problem(const VectorProblem& p) {
  if (p.m < 1 || !p.residual || !p.jacobian)
    throw std::invalid_argument("vector problem needs m >= 1, residual and jacobian");
}

bool all_finite(const std::vector<double>& v) {
  for (double t : v)
    if (!std::isfinite(t)) return false;
  return true;
}

std::vector<double> negate(std::vector<double> v) {
  for (double& t : v) t = -t;
  return v;
}

}  // namespace

std::vector<double> newton_step_multi(const VectorProblem& p, const std::vector<double>& x) {
  check_problem(p);
  return linear_solve(p.jacobian(x), negate(p.residual(x)));
}

std::vector<double> en_step_multi(const VectorProblem& p, const std::vector<double>& x,
                                  const std::vector<double>& c, double row_guard_eps,
                                  VectorStepInfo* info) {
  check_problem(p);
  const int m = p.m;
  if (static_cast<int>(c.size()) != m) throw std::invalid_argument("en_step_multi: c size mismatch");

  const std::vector<double> r = p.residual(x);
  const Matrix j = p.jacobian(x);
  Matrix a(m, m);
  std::vector<double> rhs(m);
  std::vector<double> xc = x;
  for (int i = 0; i < m; ++i) {
    xc[i] = c[i];
    const double rci = p.component(i, xc);
    const double d = r[i] - rci;
    if (std::abs(d) < row_guard_eps * (1.0 + std::abs(r[i])) || !std::isfinite(d)) {
      // Transform for this row is degenerate; keep the plain newton row.
      for (int jj = 0; jj < m; ++jj) a(i, jj) = j(i, jj);
      rhs[i] = -r[i];
      if (info) ++info->fallback_rows;
      xc[i] = x[i];
      continue;
    }
    const std::vector<double> jc = p.jac_row(i, xc);
    const double u = x[i] - c[i];
    for (int jj = 0; jj < m; ++jj) {
      const double delta = (i == jj) ? 1.0 : 0.0;
      a(i, jj) = delta * r[i] / d + u / (d * d) * (jc[jj] * r[i] * (1.0 - delta) - j(i, jj) * rci);
    }
    rhs[i] = -u * r[i] / d;
    xc[i] = x[i];
  }
  try {
    return linear_solve(a, rhs);
  } catch (const SingularMatrix&) {
    if (info) info->fell_back_to_newton = true;
    return linear_solve(j, negate(r));
  }
}

std::vector<double> cn_step_multi(const VectorProblem& p, const std::vector<double>& x,
                                  double fd_step_base, VectorStepInfo* info) {
  check_problem(p);
  const int m = p.m;
  const std::vector<double> r = p.residual(x);
  const Matrix j = p.jacobian(x);
  const std::vector<double> dxn = linear_solve(j, negate(r));

  const Tensor3 t = p.has_second() ? p.second(x) : fd_second_full(p, x, fd_step_base);
  Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < m; ++jj) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += t(i, jj, k) * dxn[k];
      a(i, jj) = j(i, jj) + 0.5 * s;
    }
  try {
    return linear_solve(a, negate(r));
  } catch (const SingularMatrix&) {
    if (info) info->fell_back_to_newton = true;
    return dxn;
  }
}

std::vector<double> qcn_step_multi(const VectorProblem& p, const std::vector<double>& x,
                                   double fd_step_base, VectorStepInfo* info) {
  check_problem(p);
  const int m = p.m;
  const std::vector<double> r = p.residual(x);
  const Matrix j = p.jacobian(x);

  Matrix s(m, m);
  if (p.has_second()) {
    const Tensor3 t = p.second(x);
    for (int i = 0; i < m; ++i)
      for (int jj = 0; jj < m; ++jj) s(i, jj) = t(i, jj, i);
  } else {
    s = fd_second_diagonal(p, x, fd_step_base);
  }

  Matrix a(m, m);
  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) {
    for (int jj = 0; jj < m; ++jj) a(i, jj) = j(i, i) * j(i, jj) - 0.5 * s(i, jj) * r[i];
    rhs[i] = -r[i] * j(i, i);
  }
  try {
    return linear_solve(a, rhs);
  } catch (const SingularMatrix&) {
    if (info) info->fell_back_to_newton = true;
    return linear_solve(j, negate(r));
  }
}

Matrix fd_second_diagonal(const VectorProblem& p, const std::vector<double>& x,
                          double fd_step_base) {
  check_problem(p);
  const int m = p.m;
  Matrix s(m, m);
  std::vector<double> xp = x, xm = x;
  for (int i = 0; i < m; ++i) {
    const double h = fd_step_base * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const std::vector<double> rp = p.jac_row(i, xp);
    const std::vector<double> rm = p.jac_row(i, xm);
    for (int jj = 0; jj < m; ++jj) s(i, jj) = (rp[jj] - rm[jj]) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return s;
}

Tensor3 fd_second_full(const VectorProblem& p, const std::vector<double>& x, double fd_step_base) {
  check_problem(p);
  const int m = p.m;
  Tensor3 t(m);
  std::vector<double> xp = x, xm = x;
  for (int k = 0; k < m; ++k) {
    const double h = fd_step_base * (1.0 + std::abs(x[k]));
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    const Matrix jp = p.jacobian(xp);
    const Matrix jm = p.jacobian(xm);
    for (int i = 0; i < m; ++i)
      for (int jj = 0; jj < m; ++jj) t(i, jj, k) = (jp(i, jj) - jm(i, jj)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return t;
}

VectorTrace solve_vector(const VectorProblem& p, const std::vector<double>& x0,
                         const VectorSolverConfig& cfg) {
  check_problem(p);
  if (static_cast<int>(x0.size()) != p.m) throw std::invalid_argument("solve_vector: x0 size mismatch");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (cfg.tol_residual == 0 && cfg.tol_step == 0)
    throw std::invalid_argument("at least one stopping tolerance must be positive");
  if (cfg.method == Method::halley_alt)
    throw std::invalid_argument("halley-alt is scalar only; use cn or qcn for systems");
  if (cfg.method == Method::en && static_cast<int>(cfg.c.size()) != p.m)
    throw std::invalid_argument("en needs a probe vector c of length m");

  VectorTrace trace;
  std::vector<double> x = x0;
  std::vector<double> r = p.residual(x);
  trace.iterates.push_back(x);
  trace.residual_norms.push_back(norm2(r));

  int n = 0;
  for (;;) {
    const double rn = trace.residual_norms.back();
    if (rn <= cfg.tol_residual) {
      trace.status = SolveStatus::converged;
      break;
    }
    if (!all_finite(x) || !all_finite(r) || norm2(x) > cfg.diverge_magnitude ||
        rn > cfg.diverge_magnitude) {
      trace.status = SolveStatus::diverged;
      break;
    }
    if (n >= cfg.max_iter) {
      trace.status = SolveStatus::max_iter;
      break;
    }

    std::vector<double> dx;
    VectorStepInfo step_info;
    bool done = false;
    try {
      switch (cfg.method) {
        case Method::newton:
          dx = newton_step_multi(p, x);
          break;
        case Method::en:
          dx = en_step_multi(p, x, cfg.c, cfg.row_guard_eps, &step_info);
          break;
        case Method::cn:
          dx = cn_step_multi(p, x, cfg.fd_step_base, &step_info);
          break;
        case Method::qcn:
          dx = qcn_step_multi(p, x, cfg.fd_step_base, &step_info);
          break;
        default:
          throw std::logic_error("unreachable");
      }
    } catch (const SingularMatrix&) {
      // newton/cn throw only when the jacobian system itself is singular;
      // en/qcn throw when their own system and the newton fallback both are.
      trace.status = (cfg.method == Method::newton || cfg.method == Method::cn)
                         ? SolveStatus::derivative_singular
                         : SolveStatus::stalled;
      done = true;
    }
    if (done) break;
    trace.fallback_rows += step_info.fallback_rows;
    if (step_info.fell_back_to_newton) ++trace.fallback_steps;

    for (int i = 0; i < p.m; ++i) x[i] += dx[i];
    r = p.residual(x);
    trace.iterates.push_back(x);
    trace.residual_norms.push_back(norm2(r));
    ++n;

    if (cfg.tol_step > 0 && norm2(dx) <= cfg.tol_step) {
      trace.status = SolveStatus::converged;
      break;
    }
  }

  trace.iterations_used = n;
  if (!p.known_roots.empty()) {
    const std::vector<double>& last = trace.iterates.back();
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < p.known_roots.size(); ++k) {
      std::vector<double> diff(p.m);
      for (int i = 0; i < p.m; ++i) diff[i] = last[i] - p.known_roots[k][i];
      const double d = norm2(diff);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    trace.errors.reserve(trace.iterates.size());
    for (const auto& xi : trace.iterates) {
      std::vector<double> diff(p.m);
      for (int i = 0; i < p.m; ++i) diff[i] = xi[i] - p.known_roots[best][i];
      trace.errors.push_back(norm2(diff));
    }
  }
  return trace;
}

}  // namespace rootbeyond
