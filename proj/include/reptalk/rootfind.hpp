#pragma once

#include <cmath>
#include <utility>

#include "reptalk/common.hpp"

namespace reptalk {

struct BisectionResult {
  double root;
  double f_at_root;
  int iterations;
};

// Plain bisection on [lo, hi]; requires f(lo) and f(hi) of opposite (nonzero)
// sign. Runs until the interval width drops below width_tol or max_iter is
// hit. Every bracket solved here is guaranteed by a monotonicity argument.
template <typename F>
BisectionResult bisect(F&& f, double lo, double hi, double width_tol,
                       int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw internal_consistency_error(
        "bisect: no sign change on [" + std::to_string(lo) + ", " +
        std::to_string(hi) + "] (f_lo=" + std::to_string(flo) +
        ", f_hi=" + std::to_string(fhi) + ")");
  }
  int it = 0;
  double mid = 0.5 * (lo + hi);
  for (; it < max_iter && (hi - lo) > width_tol; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // hit floating-point resolution
    const double fmid = f(mid);
    if (fmid == 0.0) return {mid, 0.0, it + 1};
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  mid = 0.5 * (lo + hi);
  return {mid, f(mid), it};
}

// Bisection for a nondecreasing f where the low end may sit numerically on the
// root itself (|f(lo)| below noise). Keeps the invariant f(hi) > 0 and shrinks
// toward the smallest point with positive sign.
template <typename F>
double bisect_monotone_up(F&& f, double lo, double hi, double width_tol,
                          int max_iter = 200) {
  for (int it = 0; it < max_iter && (hi - lo) > width_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace reptalk
