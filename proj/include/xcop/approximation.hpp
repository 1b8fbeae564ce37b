#pragma once

#include "xcop/copula_model.hpp"
#include "xcop/errors.hpp"
#include "xcop/grid.hpp"
#include "xcop/rational.hpp"
#include "xcop/segment_measure.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace xcop {

class RationalizeError : public DomainError {
 public:
  RationalizeError(const std::string& what, double rho) : DomainError(what), rho_(rho) {}
  /// Best max-entry deviation reached before giving up.
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

struct RationalizeResult {
  GridMeasure measure;
  Rational rho;  // max_i |t(i)/D - M(i)|
};

/// Integer tensor t with exact slice sums D/m and max |t/D - M| < m^{-(n+1)}.
/// Starts from floor(D*M) and repairs slice deficits; doubles D (up to
/// `max_retries` times) when the bound is not met.
RationalizeResult rationalize(const std::vector<double>& M, GridSpec spec, std::int64_t D,
                              int max_retries = 8);

/// Sub-interval of axis k assigned to each cell, stored as integer numerators
/// over the common denominator D. Empty for zero-mass cells.
class IntervalPartition {
 public:
  IntervalPartition(GridSpec spec, std::int64_t denominator,
                    std::vector<std::vector<std::int64_t>> starts, std::vector<std::int64_t> lengths);

  const GridSpec& spec() const noexcept { return spec_; }
  std::int64_t denominator() const noexcept { return denominator_; }
  /// Left endpoint numerator of I^(axis)_cell.
  std::int64_t start(std::size_t axis, std::size_t cell) const { return starts_[axis][cell]; }
  /// Numerator of the common length of I^(k)_cell for every axis k.
  std::int64_t length(std::size_t cell) const { return lengths_[cell]; }
  Interval interval(std::size_t axis, std::size_t cell) const;

 private:
  GridSpec spec_;
  std::int64_t denominator_;
  std::vector<std::vector<std::int64_t>> starts_;
  std::vector<std::int64_t> lengths_;
};

/// Within each slab, cells are laid out in lexicographic order of their
/// remaining indices.
IntervalPartition interval_partition(const GridMeasure& N);

struct Assembly {
  SegmentMeasure measure;
  std::int64_t order;
};

/// One all-plus interior diagonal per positive-mass cell.
Assembly assemble(const GridMeasure& N, const IntervalPartition& ip);

struct ApproximationReport {
  SegmentMeasure measure;
  std::int64_t q = 0;
  std::int64_t denominator = 0;
  double rho = 0.0;
  double lattice_dinf = 0.0;    // at resolution 4m
  double certified_bound = 0.0; // (2n+1)/m
};

/// grid_extract -> rationalize -> interval_partition -> assemble.
/// Default denominator is m^{n+2}.
ApproximationReport approximate(const CopulaModel& c, std::size_t m,
                                std::optional<std::int64_t> D = std::nullopt);

}  // namespace xcop
