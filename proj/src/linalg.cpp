#include "rootbeyond/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rootbeyond {

std::vector<double> linear_solve(Matrix a, std::vector<double> b) {
  const int m = a.rows();
  if (a.cols() != m || static_cast<int>(b.size()) != m)
    throw std::invalid_argument("linear_solve: shape mismatch");
  if (m == 0) return {};

  double amax = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) amax = std::max(amax, std::abs(a(i, j)));
  const double pivot_floor = 1e-14 * amax;

  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int i = k + 1; i < m; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= pivot_floor || amax == 0.0) throw SingularMatrix{};
    if (piv != k) {
      for (int j = 0; j < m; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < m; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < m; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }

  std::vector<double> x(m);
  for (int i = m - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < m; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double t : v) s += t * t;
  return std::sqrt(s);
}

}  // namespace rootbeyond
