// Shared helpers for the test binaries: ulp distances, loose comparisons and
// deterministic probe generators.
#ifndef ROOTBEYOND_TEST_SUPPORT_HPP
#define ROOTBEYOND_TEST_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <limits>
#include <random>

namespace testsup {

// Monotone unsigned mapping of the double line; adjacent doubles differ by 1.
inline std::uint64_t ordered_bits(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  return (u & (1ULL << 63)) ? ~u : u | (1ULL << 63);
}

inline std::uint64_t ulp_distance(double a, double b) {
  if (a == b) return 0;  // covers +0/-0
  if (!std::isfinite(a) || !std::isfinite(b))
    return std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t ua = ordered_bits(a), ub = ordered_bits(b);
  return ua >= ub ? ua - ub : ub - ua;
}

inline std::uint64_t ulp_distance(std::complex<double> a, std::complex<double> b) {
  const std::uint64_t dr = ulp_distance(a.real(), b.real());
  const std::uint64_t di = ulp_distance(a.imag(), b.imag());
  return dr > di ? dr : di;
}

// |a - b| <= tol * (1 + max(|a|, |b|)): absolute near zero, relative away.
inline bool mixed_close(double a, double b, double tol) {
  const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

inline bool mixed_close(std::complex<double> a, std::complex<double> b, double tol) {
  const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

// Deterministic probe stream for property tests.
class Probe {
 public:
  explicit Probe(std::uint64_t seed) : rng_(seed) {}

  double in(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::complex<double> in_box(double lo, double hi) {
    return {in(lo, hi), in(lo, hi)};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testsup

#endif
