#pragma once

// One-dimensional convex minimisation helpers.

#include <cmath>
#include <utility>

namespace bjortho {

struct Minimum1d {
  double arg = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Grows [center - half_width, center + half_width] by doubling until the
/// convex f is no smaller at both ends than at the center. The minimiser set
/// of f then meets the returned interval.
template <class F>
std::pair<double, double> grow_bracket(F&& f, double center, double half_width, int max_doublings = 60) {
  const double fc = f(center);
  double w = half_width;
  for (int i = 0; i < max_doublings; ++i) {
    if (f(center - w) >= fc && f(center + w) >= fc) break;
    w *= 2.0;
  }
  return {center - w, center + w};
}

/// Golden-section search for a minimum of a unimodal f on [lo, hi], stopping
/// once the interval is narrower than `width`.
template <class F>
Minimum1d golden_section(F&& f, double lo, double hi, double width) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (b - a > width && evals < 400) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc <= fd ? Minimum1d{c, fc, evals} : Minimum1d{d, fd, evals};
}

/// Smallest point (to `width`) in [lo, hi] at which the nondecreasing
/// predicate-like function `slope` becomes >= 0. Used to locate a zero of
/// the right derivative of a convex function.
template <class F>
double bisect_nonnegative(F&& slope, double lo, double hi, double width) {
  for (int i = 0; i < 200 && hi - lo > width; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (slope(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace bjortho
