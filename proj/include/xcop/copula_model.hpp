#pragma once

#include "xcop/geometry.hpp"
#include "xcop/grid.hpp"
#include "xcop/pl_map.hpp"
#include "xcop/rational.hpp"
#include "xcop/segment_measure.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace xcop {

struct Independence {
  std::size_t n = 2;
};
struct Comonotone {
  std::size_t n = 2;
};
/// W, bivariate only.
struct Countermonotone {};
/// Farlie-Gumbel-Morgenstern, bivariate: C(u,v) = uv(1 + θ(1-u)(1-v)), θ ∈ [-1,1].
struct Fgm {
  Rational theta;
};

/// Copula supported on the graph of a measure-preserving map.
struct GraphMeasure {
  PiecewiseLinearMap map;
};

/// ac_weight · (density copula) + (1 - ac_weight) · (singular copula).
class MixedMeasure {
 public:
  MixedMeasure(Rational ac_weight, std::optional<GridDensity> density,
               std::optional<SegmentMeasure> singular);

  const Rational& ac_weight() const noexcept { return ac_weight_; }
  const std::optional<GridDensity>& density() const noexcept { return density_; }
  const std::optional<SegmentMeasure>& singular() const noexcept { return singular_; }
  std::size_t dim() const;

  double box_mass(const Box& box) const;
  Rational box_mass(const RBox& box) const;

 private:
  Rational ac_weight_;
  std::optional<GridDensity> density_;
  std::optional<SegmentMeasure> singular_;
};

/// Anything that can answer CDF and box-mass queries on [0,1]^n. Whether it
/// actually is a copula is decided by validate_copula_measure.
class CopulaModel {
 public:
  using Representation = std::variant<SegmentMeasure, GridDensity, MixedMeasure, GraphMeasure,
                                      Independence, Comonotone, Countermonotone, Fgm>;

  CopulaModel(SegmentMeasure m) : rep_(std::move(m)) {}
  CopulaModel(GridDensity d) : rep_(std::move(d)) {}
  CopulaModel(MixedMeasure m) : rep_(std::move(m)) {}
  CopulaModel(GraphMeasure g) : rep_(std::move(g)) {}
  CopulaModel(Independence c);
  CopulaModel(Comonotone c);
  CopulaModel(Countermonotone c) : rep_(c) {}
  CopulaModel(Fgm c);

  static CopulaModel independence(std::size_t n) { return Independence{n}; }
  static CopulaModel comonotone(std::size_t n) { return Comonotone{n}; }
  static CopulaModel countermonotone() { return Countermonotone{}; }
  static CopulaModel fgm(Rational theta) { return Fgm{std::move(theta)}; }

  const Representation& representation() const noexcept { return rep_; }
  std::size_t dim() const;
  bool rational_backed() const;
  std::string describe() const;

  /// Throws DomainError when u is outside [0,1]^n.
  double cdf(std::span<const double> u) const;
  Rational cdf(std::span<const Rational> u) const;

  double box_mass(const Box& box) const;
  Rational box_mass(const RBox& box) const;

 private:
  Representation rep_;
};

}  // namespace xcop
