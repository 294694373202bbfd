// Scalar fixed-point root finding over double or std::complex<double>.
//
// Four update rules share the solver loop:
//   newton      dx = -r/r'
//   en          newton applied to (x-c)r(x)/(r(x)-r(c)) = 0, c a fixed probe point
//   cn          dx = -(r/r') / (1 - r r'' / (2 r'^2))   (the c->x limit of en)
//   halley_alt  dx = -(r/r') / (1 - r r'' / r'^2)
#ifndef ROOTBEYOND_SCALAR_HPP
#define ROOTBEYOND_SCALAR_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rootbeyond/common.hpp"

namespace rootbeyond {

template <class K>
struct ScalarProblem {
  std::function<K(K)> r;    // residual
  std::function<K(K)> dr;   // first derivative
  std::function<K(K)> d2r;  // second derivative; may be empty (cn/halley-alt need it)
  std::vector<K> known_roots;

  bool has_second() const { return static_cast<bool>(d2r); }
};

template <class K>
struct SolverConfig {
  Method method = Method::newton;
  std::optional<K> c;  // extended-newton probe point; defaulted from x0 when absent
  double tol_residual = 1e-12;
  double tol_step = 0.0;  // 0 disables the step-size stop
  int max_iter = 100;
  double diverge_magnitude = 1e150;
  double en_guard_eps = 1e-12;  // relative guard for x ~ c and r(x) ~ r(c)
};

template <class K>
struct IterationTrace {
  std::vector<K> iterates;             // x0 .. xN
  std::vector<double> residual_mags;   // |r(xn)|, same length as iterates
  std::vector<double> errors;          // |x* - xn| vs nearest known root; empty if none known
  SolveStatus status = SolveStatus::max_iter;
  int iterations_used = 0;
  int fallback_steps = 0;  // iterations where a degenerate en/cn step fell back to newton
};

template <class K>
K newton_step(const ScalarProblem<K>& p, K x) {
  const K d = p.dr(x);
  if (std::abs(d) < std::numeric_limits<double>::min()) throw SingularDerivative{};
  return -p.r(x) / d;
}

// r_c = r(c) is computed once per solve and passed in.
template <class K>
K en_step(const ScalarProblem<K>& p, K x, K c, K r_c, double guard_eps = 1e-12) {
  const K rx = p.r(x);
  const K diff = rx - r_c;
  if (std::abs(diff) <= guard_eps * (1.0 + std::abs(rx))) throw EnDegenerate{};
  const K den = rx - (x - c) * p.dr(x) * (r_c / diff);
  if (std::abs(den) < std::numeric_limits<double>::min() || !is_finite_value(den))
    throw EnDegenerate{};
  return -(x - c) * rx / den;
}

template <class K>
K cn_step(const ScalarProblem<K>& p, K x) {
  if (!p.has_second()) throw std::invalid_argument("cn_step requires a second derivative");
  const K d = p.dr(x);
  if (std::abs(d) < std::numeric_limits<double>::min()) throw SingularDerivative{};
  const K corr = K(1) - p.r(x) * p.d2r(x) / (K(2) * d * d);
  if (std::abs(corr) < 1e-12) throw SingularCorrection{};
  return -(p.r(x) / d) / corr;
}

template <class K>
K halley_alt_step(const ScalarProblem<K>& p, K x) {
  if (!p.has_second()) throw std::invalid_argument("halley_alt_step requires a second derivative");
  const K d = p.dr(x);
  if (std::abs(d) < std::numeric_limits<double>::min()) throw SingularDerivative{};
  const K corr = K(1) - p.r(x) * p.d2r(x) / (d * d);
  if (std::abs(corr) < 1e-12) throw SingularCorrection{};
  return -(p.r(x) / d) / corr;
}

// Local contraction factor |r''(zeta)| / (2 |r'(x)|); the quadratic error
// model is e_{n+1} ~= N * e_n^2.
template <class K>
double nonlinearity_measure(const ScalarProblem<K>& p, K zeta, K x) {
  if (!p.has_second()) throw std::invalid_argument("nonlinearity_measure requires a second derivative");
  const double d = std::abs(p.dr(x));
  if (d < std::numeric_limits<double>::min()) throw SingularDerivative{};
  return std::abs(p.d2r(zeta)) / (2.0 * d);
}

template <class K>
IterationTrace<K> solve_scalar(const ScalarProblem<K>& p, K x0, const SolverConfig<K>& cfg) {
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (cfg.tol_residual < 0 || cfg.tol_step < 0)
    throw std::invalid_argument("tolerances must be >= 0");
  if (cfg.tol_residual == 0 && cfg.tol_step == 0)
    throw std::invalid_argument("at least one stopping tolerance must be positive");
  if ((cfg.method == Method::cn || cfg.method == Method::halley_alt) && !p.has_second())
    throw std::invalid_argument("selected method requires a second derivative");
  if (cfg.method == Method::qcn)
    throw std::invalid_argument("qcn is a multivariate method; use cn for scalar problems");

  K c{};
  K r_c{};
  if (cfg.method == Method::en) {
    c = cfg.c ? *cfg.c : x0 + K(1e-3 * (1.0 + std::abs(x0)));
    // x0 == c would make x0 a fixed point of the transformed iteration, and a
    // c within rounding noise of x0 keeps r(c) ~ r(x) so every step would
    // degenerate; move c a visible distance away instead.
    if (std::abs(x0 - c) <= cfg.en_guard_eps * (1.0 + std::abs(x0)))
      c += K(1e-3 * (1.0 + std::abs(c)));
    r_c = p.r(c);
    if (!is_finite_value(r_c)) throw std::invalid_argument("r(c) is not finite");
  }

  IterationTrace<K> trace;
  K x = x0;
  K rx = p.r(x);
  trace.iterates.push_back(x);
  trace.residual_mags.push_back(std::abs(rx));

  int n = 0;
  for (;;) {
    const double rmag = std::abs(rx);
    if (rmag <= cfg.tol_residual) {
      trace.status = SolveStatus::converged;
      break;
    }
    if (!is_finite_value(x) || !is_finite_value(rx) || std::abs(x) > cfg.diverge_magnitude ||
        rmag > cfg.diverge_magnitude) {
      trace.status = SolveStatus::diverged;
      break;
    }
    if (n >= cfg.max_iter) {
      trace.status = SolveStatus::max_iter;
      break;
    }

    K dx;
    bool done = false;
    switch (cfg.method) {
      case Method::newton:
        try {
          dx = newton_step(p, x);
        } catch (const SingularDerivative&) {
          trace.status = SolveStatus::derivative_singular;
          done = true;
        }
        break;
      case Method::en:
        try {
          dx = en_step(p, x, c, r_c, cfg.en_guard_eps);
        } catch (const EnDegenerate&) {
          try {
            dx = newton_step(p, x);
            ++trace.fallback_steps;
          } catch (const SingularDerivative&) {
            trace.status = SolveStatus::stalled;
            done = true;
          }
        }
        break;
      case Method::cn:
      case Method::halley_alt:
        try {
          dx = cfg.method == Method::cn ? cn_step(p, x) : halley_alt_step(p, x);
        } catch (const SingularDerivative&) {
          trace.status = SolveStatus::derivative_singular;
          done = true;
        } catch (const SingularCorrection&) {
          // r' is known to be regular here, so the plain step is safe.
          dx = newton_step(p, x);
          ++trace.fallback_steps;
        }
        break;
      default:
        throw std::logic_error("unreachable");
    }
    if (done) break;

    x += dx;
    rx = p.r(x);
    trace.iterates.push_back(x);
    trace.residual_mags.push_back(std::abs(rx));
    ++n;

    if (cfg.tol_step > 0 && std::abs(dx) <= cfg.tol_step) {
      trace.status = SolveStatus::converged;
      break;
    }
  }

  trace.iterations_used = n;
  if (!p.known_roots.empty()) {
    // Errors are measured against the known root nearest the final iterate.
    const K last = trace.iterates.back();
    K best = p.known_roots.front();
    for (const K& root : p.known_roots)
      if (std::abs(last - root) < std::abs(last - best)) best = root;
    trace.errors.reserve(trace.iterates.size());
    for (const K& xi : trace.iterates) trace.errors.push_back(std::abs(xi - best));
  }
  return trace;
}

}  // namespace rootbeyond

#endif
