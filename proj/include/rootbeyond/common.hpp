// Shared enums, error types and small helpers used across the library.
#ifndef ROOTBEYOND_COMMON_HPP
#define ROOTBEYOND_COMMON_HPP

#include <complex>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rootbeyond {

enum class Method { newton, en, cn, qcn, halley_alt };

enum class SolveStatus { converged, max_iter, diverged, stalled, derivative_singular };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::newton: return "newton";
    case Method::en: return "en";
    case Method::cn: return "cn";
    case Method::qcn: return "qcn";
    case Method::halley_alt: return "halley-alt";
  }
  return "?";
}

inline std::optional<Method> method_from_name(std::string_view s) {
  if (s == "newton") return Method::newton;
  if (s == "en") return Method::en;
  if (s == "cn") return Method::cn;
  if (s == "qcn") return Method::qcn;
  if (s == "halley-alt" || s == "halley_alt") return Method::halley_alt;
  return std::nullopt;
}

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::derivative_singular: return "derivative_singular";
  }
  return "?";
}

// Thrown by step functions; the solve loops translate these into statuses
// or fall back to a plain newton update (see solve_scalar / solve_vector).
struct SingularDerivative : std::runtime_error {
  SingularDerivative() : std::runtime_error("derivative vanishes at evaluation point") {}
};

struct SingularCorrection : std::runtime_error {
  SingularCorrection() : std::runtime_error("second-order correction denominator vanishes") {}
};

struct EnDegenerate : std::runtime_error {
  EnDegenerate() : std::runtime_error("extended-newton transform degenerate (x too close to c)") {}
};

struct SingularMatrix : std::runtime_error {
  SingularMatrix() : std::runtime_error("matrix is singular to working precision") {}
};

struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGrid : std::runtime_error {
  explicit DegenerateGrid(const std::string& what) : std::runtime_error(what) {}
};

// Round-trippable text form of a double (17 significant digits).
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <class K>
struct field_traits;

template <>
struct field_traits<double> {
  using real = double;
  static bool finite(double v) { return std::isfinite(v); }
};

template <class T>
struct field_traits<std::complex<T>> {
  using real = T;
  static bool finite(const std::complex<T>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
};

template <class K>
bool is_finite_value(const K& v) {
  return field_traits<K>::finite(v);
}

}  // namespace rootbeyond

#endif
