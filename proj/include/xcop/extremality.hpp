#pragma once

#include "xcop/copula_model.hpp"
#include "xcop/errors.hpp"
#include "xcop/geometry.hpp"
#include "xcop/grid.hpp"
#include "xcop/rational.hpp"
#include "xcop/segment_measure.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace xcop {

/// The closed cube corner + [0, edge]^n.
struct SquareRegion {
  RPoint corner;
  Rational edge;

  friend bool operator==(const SquareRegion&, const SquareRegion&) = default;
};

/// Fraction of the square's volume on which the density vanishes.
Rational zero_fraction(const GridDensity& d, const SquareRegion& s);

/// First square, scanning scales from coarse to fine and corners in
/// lexicographic order on the (possibly refined) grid, whose zero set fills
/// less than a quarter of it. Each scale is aligned on the smallest
/// refinement of the grid that makes the edge an even number of cells.
std::optional<SquareRegion> find_dense_square(const GridDensity& d, const std::vector<Rational>& scales);

/// Densities h1, h2 with (h1 + h2)/2 = d obtained by adding and subtracting
/// g = min of the four quadrant translates in a checkerboard pattern over the
/// first two coordinates.
struct DecompositionWitness {
  GridDensity h1;
  GridDensity h2;
  std::vector<Rational> g;             // on the quarter region, lexicographic
  std::vector<std::size_t> g_shape;    // cells per axis: c, c, 2c, ..., 2c
  SquareRegion square;
  Rational zero_fraction;
};

class HypothesisViolation : public DomainError {
 public:
  HypothesisViolation(const Rational& zero_fraction);
  const Rational& zero_fraction() const noexcept { return zero_fraction_; }

 private:
  Rational zero_fraction_;
};

/// Throws HypothesisViolation when the zero set fills a quarter or more of s.
DecompositionWitness lemma_decompose(const GridDensity& d, const SquareRegion& s);

enum class Verdict {
  NotExtreme,
  NecessaryConditionPassed,
  /// Absolutely continuous part present but no square qualified above the
  /// configured scale floor.
  Inconclusive,
};

struct SingularityDiagnostic {
  Verdict verdict = Verdict::NecessaryConditionPassed;
  std::optional<DecompositionWitness> witness;
  /// The two copulas averaging to the input, each carrying the singular part unchanged.
  std::optional<MixedMeasure> half1;
  std::optional<MixedMeasure> half2;
};

/// Dyadic scales 1, 1/2, ... down to `scale_floor` (default: one grid cell).
SingularityDiagnostic singularity_diagnostic(const MixedMeasure& mm,
                                             std::optional<Rational> scale_floor = std::nullopt);

/// True iff inside the slab {x_axis ∈ B} every fiber meets the support in at
/// most one point, ignoring overlaps of zero length. `axis` is 0-based.
bool is_functional_over(const SegmentMeasure& sm, std::size_t axis, const std::vector<Interval>& B);

struct FunctionalCoverCertificate {
  std::size_t resolution = 1;
  std::vector<std::vector<Interval>> slabs;  // B_i per axis, merged
  bool covered = false;
};

/// Greedy cover: B_i collects every interval [j/r,(j+1)/r] over which the
/// support is a graph along axis i. `covered` certifies extremality.
/// Usually r is a power of 2, but any r >= 1 is accepted.
FunctionalCoverCertificate functional_cover_check(const SegmentMeasure& sm, std::size_t r);

}  // namespace xcop
