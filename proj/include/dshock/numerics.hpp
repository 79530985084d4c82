#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dshock {

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Bisection for a root of `fn` on [lo, hi]; fn(lo) and fn(hi) must have
/// opposite signs (or one of them vanish). Stops once the bracket is no wider
/// than `x_tol` and |fn(mid)| <= f_tol, or when no double lies strictly
/// between the bracket ends.
template <class Fn>
RootResult bisect(Fn&& fn, double lo, double hi, double x_tol, double f_tol,
                  int max_iter = 4000) {
  double f_lo = fn(lo);
  if (f_lo == 0.0) return {lo, 0.0, 0};
  double f_hi = fn(hi);
  if (f_hi == 0.0) return {hi, 0.0, 0};
  RootResult best{lo, f_lo, 0};
  if (std::abs(f_hi) < std::abs(f_lo)) best = {hi, f_hi, 0};
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = fn(mid);
    if (std::abs(f_mid) <= std::abs(best.residual)) best = {mid, f_mid, it};
    best.iterations = it;
    if (f_mid == 0.0) return {mid, 0.0, it};
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= x_tol && std::abs(f_mid) <= f_tol) {
      return {mid, f_mid, it};
    }
  }
  return best;
}

/// Adaptive Gauss-Kronrod (7/15) quadrature.
template <class Fn>
double integrate(Fn&& fn, double a, double b, double rel_tol = 1e-12,
                 unsigned max_depth = 15, double* error_estimate = nullptr) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          fn, a, b, max_depth, rel_tol, &err);
  if (error_estimate) *error_estimate = err;
  return value;
}

/// `n` points, log-uniform on [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = hi;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::exp(a + (b - a) * static_cast<double>(k) /
                              static_cast<double>(n - 1));
  }
  out.back() = hi;
  return out;
}

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

}  // namespace dshock
