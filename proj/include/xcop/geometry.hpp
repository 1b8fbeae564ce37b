#pragma once

#include "xcop/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace xcop {

using Point = std::vector<double>;
using RPoint = std::vector<Rational>;

/// Closed axis-aligned box [lo, hi] in [0,1]^n.
template <class T>
struct BasicBox {
  std::vector<T> lo;
  std::vector<T> hi;

  std::size_t dim() const noexcept { return lo.size(); }
};

using Box = BasicBox<double>;
using RBox = BasicBox<Rational>;

/// Closed interval with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi > lo ? Rational(hi - lo) : Rational(0); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Sorts and merges intervals that overlap or touch.
std::vector<Interval> merge_intervals(std::vector<Interval> xs);

template <class T>
BasicBox<T> lower_orthant(std::span<const T> u) {
  return {std::vector<T>(u.size(), T(0)), std::vector<T>(u.begin(), u.end())};
}

/// Length of the parameter set {t in [0,1] : a + t(b-a) in [lo,hi]}.
/// Exact for Rational, a handful of flops for double.
template <class T>
T segment_fraction(const T* a, const T* b, const T* lo, const T* hi, std::size_t n) {
  T t0 = T(0);
  T t1 = T(1);
  for (std::size_t k = 0; k < n; ++k) {
    const T d = b[k] - a[k];
    if (d == 0) {
      if (a[k] < lo[k] || a[k] > hi[k]) return T(0);
      continue;
    }
    T s = (lo[k] - a[k]) / d;
    T e = (hi[k] - a[k]) / d;
    if (d < 0) std::swap(s, e);
    if (s > t0) t0 = s;
    if (e < t1) t1 = e;
    if (t1 <= t0) return T(0);
  }
  return t1 - t0;
}

}  // namespace xcop
