#pragma once

#include "xcop/geometry.hpp"
#include "xcop/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace xcop {

/// An n-dimensional m x ... x m grid of cells [j/m,(j+1)/m).
struct GridSpec {
  std::size_t n = 2;
  std::size_t m = 1;

  std::size_t cells() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

std::size_t ipow(std::size_t base, std::size_t exponent);

/// Lexicographic (row-major, axis 0 most significant) cell numbering.
std::size_t flat_index(std::span<const std::size_t> idx, std::size_t m);
void unflatten(std::size_t flat, std::size_t m, std::span<std::size_t> idx);

/// Visits every multi-index in [lo_k, hi_k) per axis, in lexicographic order.
template <class F>
void for_each_index(std::span<const std::size_t> lo, std::span<const std::size_t> hi, F&& f) {
  const std::size_t n = lo.size();
  for (std::size_t k = 0; k < n; ++k)
    if (lo[k] >= hi[k]) return;
  std::vector<std::size_t> idx(lo.begin(), lo.end());
  while (true) {
    f(std::span<const std::size_t>(idx));
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++idx[k] < hi[k]) break;
      idx[k] = lo[k];
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

/// A member of M_m^n scaled by a common denominator: cell i has mass t(i)/D and
/// every axial slab sums to exactly D/m.
class GridMeasure {
 public:
  GridMeasure(GridSpec spec, std::int64_t denominator, std::vector<std::int64_t> entries);

  const GridSpec& spec() const noexcept { return spec_; }
  std::int64_t denominator() const noexcept { return denominator_; }
  const std::vector<std::int64_t>& entries() const noexcept { return entries_; }
  std::int64_t entry(std::size_t flat) const { return entries_[flat]; }
  Rational mass(std::size_t flat) const { return Rational(entries_[flat], denominator_); }

  /// Integer sums of every slab along `axis`.
  std::vector<std::int64_t> slice_sums(std::size_t axis) const;

  friend bool operator==(const GridMeasure&, const GridMeasure&) = default;

 private:
  GridSpec spec_;
  std::int64_t denominator_;
  std::vector<std::int64_t> entries_;
};

/// Piecewise-constant density on an m-grid whose every axial slab integrates
/// to 1/m, i.e. an absolutely continuous copula.
class GridDensity {
 public:
  GridDensity(GridSpec spec, std::vector<Rational> values);

  /// Density d(i) = mass(i) * m^n.
  static GridDensity from_cell_masses(GridSpec spec, const std::vector<Rational>& masses);
  static GridDensity from_grid_measure(const GridMeasure& measure);
  /// The independence copula on the trivial grid.
  static GridDensity uniform(std::size_t n);

  const GridSpec& spec() const noexcept { return spec_; }
  const std::vector<Rational>& values() const noexcept { return values_; }
  const Rational& value(std::size_t flat) const { return values_[flat]; }

  /// Same function on the grid with `factor` times as many cells per axis.
  GridDensity refine(std::size_t factor) const;

  double box_mass(const Box& box) const;
  Rational box_mass(const RBox& box) const;

  /// True when both describe the same function (compared on a common grid).
  bool same_function(const GridDensity& other) const;

  friend bool operator==(const GridDensity&, const GridDensity&) = default;

 private:
  GridDensity() = default;

  GridSpec spec_;
  std::vector<Rational> values_;
  std::vector<double> dvalues_;
};

}  // namespace xcop
