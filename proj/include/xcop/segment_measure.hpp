#pragma once

#include "xcop/geometry.hpp"
#include "xcop/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace xcop {

/// Line segment a -> b carrying uniform (arclength) mass `weight`.
struct Segment {
  RPoint a;
  RPoint b;
  Rational weight;

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Finite weighted union of segments in [0,1]^n, each carrying uniform mass.
///
/// Geometry is stored exactly; a double copy is cached for the fast CDF path.
/// `rational_backed` records whether the inputs were genuinely rational (as
/// opposed to converted floats), which decides whether validations demand
/// exact equality or a 1e-12 tolerance.
class SegmentMeasure {
 public:
  SegmentMeasure(std::size_t n, std::vector<Segment> segments, bool rational_backed = true);

  std::size_t dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return segments_.size(); }
  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const Segment& operator[](std::size_t i) const { return segments_[i]; }
  bool rational_backed() const noexcept { return rational_backed_; }

  Rational total_weight() const;
  /// Σw = 1 exactly when rational-backed, within 1e-12 otherwise.
  bool is_normalized() const;

  double box_mass(const Box& box) const;
  Rational box_mass(const RBox& box) const;
  double cdf(std::span<const double> u) const;
  Rational cdf(std::span<const Rational> u) const;

  /// Exact mass of the slabs [j/m,(j+1)/m) along `axis` (last slab closed).
  std::vector<Rational> slab_masses(std::size_t axis, std::size_t m) const;

  std::span<const double> start(std::size_t i) const { return {da_.data() + i * n_, n_}; }
  std::span<const double> end(std::size_t i) const { return {db_.data() + i * n_, n_}; }
  double weight(std::size_t i) const { return dw_[i]; }

  friend bool operator==(const SegmentMeasure& x, const SegmentMeasure& y) {
    return x.n_ == y.n_ && x.segments_ == y.segments_;
  }

 private:
  std::size_t n_;
  std::vector<Segment> segments_;
  bool rational_backed_;
  std::vector<double> da_, db_, dw_;
};

}  // namespace xcop
