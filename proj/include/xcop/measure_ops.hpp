#pragma once

#include "xcop/copula_model.hpp"
#include "xcop/geometry.hpp"
#include "xcop/rational.hpp"
#include "xcop/segment_measure.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace xcop {

double cdf_eval(const CopulaModel& c, std::span<const double> u);

/// Mass of each slab {u_axis ∈ [j/m,(j+1)/m)} for j = 0..m-1 (last slab closed).
/// `axis` is 0-based.
std::vector<double> marginal_slice_masses(const CopulaModel& c, std::size_t axis, std::size_t m);
std::vector<Rational> exact_marginal_slice_masses(const CopulaModel& c, std::size_t axis, std::size_t m);

struct ValidationReport {
  bool ok = false;
  double max_deviation = 0.0;
  std::size_t worst_axis = 0;
  std::size_t worst_slab = 0;
  bool exact = false;  // computed in exact arithmetic
};

/// Checks that every slab at resolution m carries 1/m. Rational-backed
/// models are checked exactly, so any nonzero deviation fails at tol = 0.
/// Throws DomainError when the model's weights are not normalized.
ValidationReport validate_copula_measure(const CopulaModel& c, std::size_t m, double tol);

struct DinfResult {
  double estimate = 0.0;
  double certified_bound = 0.0;
  Point argmax;
};

/// Max |C_a - C_b| over the lattice {0,1/r,...,1}^n; the certified bound adds
/// n/r using 1-Lipschitz continuity in each coordinate.
DinfResult dinf_distance(const CopulaModel& a, const CopulaModel& b, std::size_t r);

/// i.i.d. draws: segment chosen by weight, then a uniform position on it.
std::vector<Point> sample(const SegmentMeasure& measure, std::size_t count, std::uint64_t seed);

/// Cell masses M(i) = P(S_{i/m, 1/m}) in lexicographic cell order.
std::vector<double> grid_extract(const CopulaModel& c, std::size_t m);
std::vector<Rational> grid_extract_exact(const CopulaModel& c, std::size_t m);

}  // namespace xcop
