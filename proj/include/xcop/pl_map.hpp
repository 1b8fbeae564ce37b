#pragma once

#include "xcop/geometry.hpp"
#include "xcop/rational.hpp"
#include "xcop/segment_measure.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace xcop {

struct AffinePiece {
  Rational slope;
  Rational intercept;

  friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// Where a coordinate map fails to push Lebesgue measure forward to itself:
/// λ(f_k^{-1}(interval)) != length(interval).
struct PushforwardDefect {
  std::size_t coord;  // 0 for f_2, 1 for f_3, ...
  Interval interval;
  Rational preimage_length;
};

/// f: [0,1] -> [0,1]^{n-1}, affine in every coordinate on each half-open
/// piece [x_j, x_{j+1}). Coordinates are indexed from 0, so coordinate c
/// describes axis c+2 of the graph.
class PiecewiseLinearMap {
 public:
  /// `pieces[j][c]` is coordinate c on [x_j, x_{j+1}).
  PiecewiseLinearMap(std::vector<Rational> breakpoints,
                     std::vector<std::vector<AffinePiece>> pieces, bool rational_backed = true);

  static PiecewiseLinearMap identity(std::size_t n);
  /// Continuous interpolant of `fn(coord, x)` through the given breakpoints.
  static PiecewiseLinearMap interpolate(std::size_t n, std::vector<Rational> breakpoints,
                                        const std::function<Rational(std::size_t, const Rational&)>& fn);

  std::size_t dim() const noexcept { return coords_ + 1; }
  std::size_t coords() const noexcept { return coords_; }
  std::size_t piece_count() const noexcept { return pieces_.size(); }
  bool rational_backed() const noexcept { return rational_backed_; }
  const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }
  const AffinePiece& piece(std::size_t j, std::size_t coord) const { return pieces_[j][coord]; }

  Rational value(std::size_t coord, const Rational& x) const;
  double value(std::size_t coord, double x) const;

  /// λ{x : f_coord(x) ∈ [lo,hi)}; the slab ending at 1 is closed.
  Rational preimage_length(std::size_t coord, const Rational& lo, const Rational& hi) const;

  /// λ{x ∈ [lo_1,hi_1] : f_k(x) ∈ [lo_k,hi_k] for all k >= 2}.
  double box_mass(const Box& box) const;
  Rational box_mass(const RBox& box) const;

  /// Exact test of λ∘f_k^{-1} = λ for every coordinate: the pushforward
  /// density Σ 1/|slope| must be 1 between consecutive image breakpoints and
  /// no piece may be flat. Returns the first defect found.
  std::optional<PushforwardDefect> pushforward_defect() const;

  /// Graph as segments: piece j becomes (x_j, f(x_j)) -> (x_{j+1}, f(x_{j+1}-))
  /// with weight x_{j+1} - x_j.
  SegmentMeasure to_segment_measure() const;

  friend bool operator==(const PiecewiseLinearMap& a, const PiecewiseLinearMap& b) {
    return a.breakpoints_ == b.breakpoints_ && a.pieces_ == b.pieces_;
  }

 private:
  std::size_t locate(const Rational& x) const;

  std::vector<Rational> breakpoints_;
  std::vector<std::vector<AffinePiece>> pieces_;
  std::size_t coords_;
  bool rational_backed_;
  std::vector<double> dbreaks_;
  std::vector<double> dslope_, dintercept_;  // [piece * coords + coord]
};

}  // namespace xcop
