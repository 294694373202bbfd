// Benchmark problem catalog, addressable by name from the CLI
// ("exp_h:H=500", "cubic_unity", "two_spring:H=500", "easom", ...).
#ifndef ROOTBEYOND_PROBLEMS_HPP
#define ROOTBEYOND_PROBLEMS_HPP

#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rootbeyond/scalar.hpp"
#include "rootbeyond/vector.hpp"

namespace rootbeyond {

enum class ProblemKind { scalar_real, scalar_complex, vector };

struct CatalogEntry {
  std::string name;
  std::map<std::string, double> parameters;
  std::variant<ScalarProblem<double>, ScalarProblem<std::complex<double>>, VectorProblem> problem;

  ProblemKind kind() const { return static_cast<ProblemKind>(problem.index()); }
  const ScalarProblem<double>& scalar_real() const {
    return std::get<ScalarProblem<double>>(problem);
  }
  const ScalarProblem<std::complex<double>>& scalar_complex() const {
    return std::get<ScalarProblem<std::complex<double>>>(problem);
  }
  const VectorProblem& vector() const { return std::get<VectorProblem>(problem); }
};

// r(x) = e^x - H, root ln H. Requires H > 0.
ScalarProblem<double> make_exp_h(double h);

// r(z) = z^3 - 1 over the complex plane; roots 1, -1/2 - sqrt(3)/2 i, -1/2 + sqrt(3)/2 i.
ScalarProblem<std::complex<double>> make_cubic_unity();

// r(x) = x^3 - 1 over the reals; root 1.
ScalarProblem<double> make_cubic_unity_real();

// Two-spring force balance: r1 = e^{x1} - e^{x2-x1}, r2 = e^{x2-x1} - 1 - H;
// root (ln(1+H), 2 ln(1+H)). Requires H > -1.
VectorProblem make_two_spring(double h);

// Gradient system of f(x,y) = -cos x cos y exp(-x^2-y^2); stationary point (0,0).
VectorProblem make_easom_gradient();

double easom_objective(double x, double y);

// Parses "name" or "name:key=value[,key=value...]" into a catalog entry.
// Throws std::invalid_argument for unknown names or malformed parameters.
CatalogEntry parse_problem_spec(const std::string& spec);

std::vector<std::string> catalog_names();

}  // namespace rootbeyond

#endif
