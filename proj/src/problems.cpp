#include "rootbeyond/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rootbeyond {

ScalarProblem<double> make_exp_h(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("exp_h: H must be > 0");
  ScalarProblem<double> p;
  p.r = [h](double x) { return std::exp(x) - h; };
  p.dr = [](double x) { return std::exp(x); };
  p.d2r = [](double x) { return std::exp(x); };
  p.known_roots = {std::log(h)};
  return p;
}

ScalarProblem<std::complex<double>> make_cubic_unity() {
  using C = std::complex<double>;
  ScalarProblem<C> p;
  p.r = [](C z) { return z * z * z - 1.0; };
  p.dr = [](C z) { return 3.0 * z * z; };
  p.d2r = [](C z) { return 6.0 * z; };
  const double s = std::sqrt(0.75);
  p.known_roots = {C(1.0, 0.0), C(-0.5, -s), C(-0.5, s)};
  return p;
}

ScalarProblem<double> make_cubic_unity_real() {
  ScalarProblem<double> p;
  p.r = [](double x) { return x * x * x - 1.0; };
  p.dr = [](double x) { return 3.0 * x * x; };
  p.d2r = [](double x) { return 6.0 * x; };
  p.known_roots = {1.0};
  return p;
}

VectorProblem make_two_spring(double h) {
  if (!(h > -1.0)) throw std::invalid_argument("two_spring: H must be > -1");
  VectorProblem p;
  p.m = 2;
  p.residual = [h](const std::vector<double>& x) -> std::vector<double> {
    const double e1 = std::exp(x[0]);
    const double e2 = std::exp(x[1] - x[0]);
    return {e1 - e2, e2 - 1.0 - h};
  };
  p.jacobian = [](const std::vector<double>& x) {
    const double e1 = std::exp(x[0]);
    const double e2 = std::exp(x[1] - x[0]);
    Matrix j(2, 2);
    j(0, 0) = e1 + e2;
    j(0, 1) = -e2;
    j(1, 0) = -e2;
    j(1, 1) = e2;
    return j;
  };
  p.second = [](const std::vector<double>& x) {
    const double e1 = std::exp(x[0]);
    const double e2 = std::exp(x[1] - x[0]);
    Tensor3 t(2);
    t(0, 0, 0) = e1 - e2;
    t(0, 0, 1) = e2;
    t(0, 1, 0) = e2;
    t(0, 1, 1) = -e2;
    t(1, 0, 0) = e2;
    t(1, 0, 1) = -e2;
    t(1, 1, 0) = -e2;
    t(1, 1, 1) = e2;
    return t;
  };
  // Same expressions as residual/jacobian so single-component values match
  // the full evaluations bit for bit.
  p.residual_component = [h](int i, const std::vector<double>& x) {
    const double e2 = std::exp(x[1] - x[0]);
    return i == 0 ? std::exp(x[0]) - e2 : e2 - 1.0 - h;
  };
  p.jacobian_row = [](int i, const std::vector<double>& x) -> std::vector<double> {
    const double e2 = std::exp(x[1] - x[0]);
    if (i == 0) return {std::exp(x[0]) + e2, -e2};
    return {-e2, e2};
  };
  const double l = std::log(1.0 + h);
  p.known_roots = {{l, 2.0 * l}};
  return p;
}

namespace {

// f(x,y) = -u(x) u(y) with u(t) = cos t exp(-t^2); the gradient system and
// its derivatives are products of the u-derivative chain below.
double u0(double t) { return std::cos(t) * std::exp(-t * t); }
double u1(double t) { return -(std::sin(t) + 2.0 * t * std::cos(t)) * std::exp(-t * t); }
double u2(double t) {
  return -((3.0 - 4.0 * t * t) * std::cos(t) - 4.0 * t * std::sin(t)) * std::exp(-t * t);
}
double u3(double t) {
  return -((8.0 * t * t * t - 18.0 * t) * std::cos(t) + (12.0 * t * t - 7.0) * std::sin(t)) *
         std::exp(-t * t);
}

}  // namespace

double easom_objective(double x, double y) { return -u0(x) * u0(y); }

VectorProblem make_easom_gradient() {
  VectorProblem p;
  p.m = 2;
  p.residual = [](const std::vector<double>& x) -> std::vector<double> {
    return {-u1(x[0]) * u0(x[1]), -u0(x[0]) * u1(x[1])};
  };
  p.jacobian = [](const std::vector<double>& x) {
    Matrix j(2, 2);
    j(0, 0) = -u2(x[0]) * u0(x[1]);
    j(0, 1) = -u1(x[0]) * u1(x[1]);
    j(1, 0) = -u1(x[0]) * u1(x[1]);
    j(1, 1) = -u0(x[0]) * u2(x[1]);
    return j;
  };
  p.second = [](const std::vector<double>& x) {
    const double a = x[0], b = x[1];
    Tensor3 t(2);
    t(0, 0, 0) = -u3(a) * u0(b);
    t(0, 0, 1) = -u2(a) * u1(b);
    t(0, 1, 0) = -u2(a) * u1(b);
    t(0, 1, 1) = -u1(a) * u2(b);
    t(1, 0, 0) = -u2(a) * u1(b);
    t(1, 0, 1) = -u1(a) * u2(b);
    t(1, 1, 0) = -u1(a) * u2(b);
    t(1, 1, 1) = -u0(a) * u3(b);
    return t;
  };
  p.residual_component = [](int i, const std::vector<double>& x) {
    return i == 0 ? -u1(x[0]) * u0(x[1]) : -u0(x[0]) * u1(x[1]);
  };
  p.jacobian_row = [](int i, const std::vector<double>& x) -> std::vector<double> {
    if (i == 0) return {-u2(x[0]) * u0(x[1]), -u1(x[0]) * u1(x[1])};
    return {-u1(x[0]) * u1(x[1]), -u0(x[0]) * u2(x[1])};
  };
  p.known_roots = {{0.0, 0.0}};
  return p;
}

namespace {

std::map<std::string, double> parse_params(const std::string& s) {
  std::map<std::string, double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("malformed parameter '" + item + "' (want key=value)");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    size_t used = 0;
    double v;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parameter '" + key + "' has non-numeric value '" + val + "'");
    }
    if (used != val.size())
      throw std::invalid_argument("parameter '" + key + "' has trailing junk in '" + val + "'");
    out[key] = v;
  }
  return out;
}

double require_param(const std::map<std::string, double>& params, const std::string& name,
                     const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument(name + " requires parameter " + key + " (e.g. " + name + ":" + key + "=500)");
  return it->second;
}

}  // namespace

CatalogEntry parse_problem_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) params = parse_params(spec.substr(colon + 1));

  CatalogEntry e;
  e.name = name;
  e.parameters = params;
  if (name == "exp_h") {
    e.problem = make_exp_h(require_param(params, name, "H"));
  } else if (name == "cubic_unity") {
    e.problem = make_cubic_unity();
  } else if (name == "cubic_unity_real") {
    e.problem = make_cubic_unity_real();
  } else if (name == "two_spring") {
    e.problem = make_two_spring(require_param(params, name, "H"));
  } else if (name == "easom") {
    e.problem = make_easom_gradient();
  } else {
    throw std::invalid_argument("unknown problem '" + name + "'");
  }
  return e;
}

std::vector<std::string> catalog_names() {
  return {"exp_h", "cubic_unity", "cubic_unity_real", "two_spring", "easom"};
}

}  // namespace rootbeyond
