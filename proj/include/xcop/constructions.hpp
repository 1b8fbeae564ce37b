#pragma once

#include "xcop/copula_model.hpp"
#include "xcop/errors.hpp"
#include "xcop/pl_map.hpp"
#include "xcop/rational.hpp"
#include "xcop/segment_measure.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xcop {

/// Choice of interior diagonal of a box: axis k runs lo->hi when signs[k] = +1
/// and hi->lo when -1. The first sign is always +1 since a diagonal and its
/// reversal are the same set, leaving 2^{n-1} distinct diagonals.
class Orientation {
 public:
  explicit Orientation(std::vector<int> signs);

  static Orientation all_plus(std::size_t n) { return Orientation(std::vector<int>(n, 1)); }
  /// Bit k-1 of `code` set means axis k (k >= 1) is reversed; code 0 is all-plus.
  static Orientation from_code(std::size_t n, std::uint32_t code);
  /// "++-" style; the first character must be '+'.
  static Orientation parse(std::string_view text);

  std::size_t dim() const noexcept { return signs_.size(); }
  const std::vector<int>& signs() const noexcept { return signs_; }
  std::uint32_t code() const;
  std::string str() const;

  friend bool operator==(const Orientation&, const Orientation&) = default;

 private:
  std::vector<int> signs_;
};

/// Endpoints of the oriented interior diagonal of [lo, hi].
std::pair<RPoint, RPoint> interior_diagonal(const RPoint& lo, const RPoint& hi, const Orientation& o);

/// Order-m permutation copula: cell (i, σ_2(i), ..., σ_n(i)) carries mass 1/m
/// on one of its interior diagonals.
struct PermutationCopulaSpec {
  std::size_t m = 1;
  std::vector<std::vector<std::size_t>> perms;  // σ_2, ..., σ_n
  std::vector<Orientation> orientations;        // per row i; empty means all-plus

  std::size_t dim() const noexcept { return perms.size() + 1; }
};

/// Two segments 0 -> (t,1,...,1) -> (1,0,...,0) with weights t and 1-t.
SegmentMeasure tent_copula(const Rational& t, std::size_t n = 2);

/// Block i is an interior diagonal of [t_i, t_{i+1}] x [0,1]^{n-1} with weight
/// t_{i+1} - t_i. `orientations` is per block (empty = all-plus).
SegmentMeasure shuffle_copula(std::size_t n, const std::vector<Rational>& breaks,
                              const std::vector<Orientation>& orientations = {});

/// Shuffle over an infinite non-decreasing sequence t_1 = 0, t_2, ... -> limit.
/// Terms are generated until limit - t_M < tail_tolerance; the remainder
/// [t_M, limit] becomes one block, followed by the block [limit, 1].
SegmentMeasure countable_shuffle_copula(std::size_t n, const std::function<Rational(std::size_t)>& term,
                                        const Rational& limit, const Rational& tail_tolerance,
                                        std::size_t max_terms = 1u << 20);

SegmentMeasure permutation_copula(const PermutationCopulaSpec& spec);

/// Mass moved by -alpha (mod 1): the result P_α satisfies P_α(B) = P(B + α).
/// Segments crossing a wrap boundary are split with proportional weights.
SegmentMeasure shift_transform(const SegmentMeasure& c, const std::vector<Rational>& alpha);

/// Exchanges the slabs [a,a+δ] and [b,b+δ] along `axis` (0-based). An involution.
SegmentMeasure swap_transform(const SegmentMeasure& c, std::size_t axis, const Rational& a,
                              const Rational& b, const Rational& delta);

/// The three-dimensional four-segment example, each segment with weight 1/4.
SegmentMeasure four_line_3d();

class NotMeasurePreserving : public DomainError {
 public:
  explicit NotMeasurePreserving(PushforwardDefect defect);
  const PushforwardDefect& defect() const noexcept { return defect_; }

 private:
  PushforwardDefect defect_;
};

/// The unique copula supported on the graph of f. Throws NotMeasurePreserving
/// (with the offending interval) unless every coordinate preserves λ.
CopulaModel graph_copula(const PiecewiseLinearMap& f);

struct MeasurePreservingReport {
  bool ok = false;
  std::vector<bool> coord_ok;  // per coordinate f_2, ..., f_n
  double max_deviation = 0.0;
  std::size_t witness_coord = 0;
  Interval witness;  // [j/r, (j+1)/r)
  Rational witness_preimage;
};

/// Compares λ(f_k^{-1}(B)) with 1/r for every B = [j/r,(j+1)/r), exactly.
MeasurePreservingReport measure_preserving_check(const PiecewiseLinearMap& f, std::size_t r);

}  // namespace xcop
