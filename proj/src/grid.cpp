#include "xcop/grid.hpp"

#include "xcop/errors.hpp"

#include <numeric>
#include <string>

namespace xcop {

std::size_t ipow(std::size_t base, std::size_t exponent) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exponent; ++i) r *= base;
  return r;
}

std::size_t GridSpec::cells() const { return ipow(m, n); }

std::size_t flat_index(std::span<const std::size_t> idx, std::size_t m) {
  std::size_t flat = 0;
  for (std::size_t k : idx) flat = flat * m + k;
  return flat;
}

void unflatten(std::size_t flat, std::size_t m, std::span<std::size_t> idx) {
  for (std::size_t k = idx.size(); k > 0; --k) {
    idx[k - 1] = flat % m;
    flat /= m;
  }
}

namespace {

void check_spec(const GridSpec& spec) {
  if (spec.n < 2) throw DomainError("grid dimension must be at least 2");
  if (spec.m < 1) throw DomainError("grid resolution must be at least 1");
}

}  // namespace

GridMeasure::GridMeasure(GridSpec spec, std::int64_t denominator, std::vector<std::int64_t> entries)
    : spec_(spec), denominator_(denominator), entries_(std::move(entries)) {
  check_spec(spec_);
  if (denominator_ <= 0) throw DomainError("grid measure denominator must be positive");
  if (denominator_ % static_cast<std::int64_t>(spec_.m) != 0) {
    throw DomainError("grid measure denominator must be divisible by m");
  }
  if (entries_.size() != spec_.cells()) throw DomainError("grid measure has wrong number of cells");
  for (auto t : entries_)
    if (t < 0) throw DomainError("grid measure entries must be non-negative");
  const std::int64_t target = denominator_ / static_cast<std::int64_t>(spec_.m);
  for (std::size_t axis = 0; axis < spec_.n; ++axis) {
    auto sums = slice_sums(axis);
    for (std::size_t j = 0; j < sums.size(); ++j) {
      if (sums[j] != target) {
        throw DomainError("grid measure is not stochastic in coordinate " + std::to_string(axis + 1) +
                          " (slab " + std::to_string(j) + " sums to " + std::to_string(sums[j]) +
                          ", expected " + std::to_string(target) + ")");
      }
    }
  }
}

std::vector<std::int64_t> GridMeasure::slice_sums(std::size_t axis) const {
  std::vector<std::int64_t> sums(spec_.m, 0);
  std::vector<std::size_t> idx(spec_.n);
  for (std::size_t f = 0; f < entries_.size(); ++f) {
    unflatten(f, spec_.m, idx);
    sums[idx[axis]] += entries_[f];
  }
  return sums;
}

GridDensity::GridDensity(GridSpec spec, std::vector<Rational> values)
    : spec_(spec), values_(std::move(values)) {
  check_spec(spec_);
  if (values_.size() != spec_.cells()) throw DomainError("grid density has wrong number of cells");
  for (const auto& v : values_)
    if (v < 0) throw DomainError("grid density must be non-negative");
  // Each slab holds m^(n-1) cells of volume m^-n; integrating to 1/m means the
  // slab's values sum to m^(n-1).
  const Rational target(static_cast<long>(ipow(spec_.m, spec_.n - 1)));
  std::vector<std::size_t> idx(spec_.n);
  for (std::size_t axis = 0; axis < spec_.n; ++axis) {
    std::vector<Rational> sums(spec_.m, Rational(0));
    for (std::size_t f = 0; f < values_.size(); ++f) {
      unflatten(f, spec_.m, idx);
      sums[idx[axis]] += values_[f];
    }
    for (std::size_t j = 0; j < spec_.m; ++j) {
      if (sums[j] != target) {
        throw DomainError("grid density slab " + std::to_string(j) + " of coordinate " +
                          std::to_string(axis + 1) + " does not integrate to 1/m");
      }
    }
  }
  dvalues_ = to_doubles(values_);
}

GridDensity GridDensity::from_cell_masses(GridSpec spec, const std::vector<Rational>& masses) {
  const Rational scale(static_cast<long>(spec.cells()));
  std::vector<Rational> values;
  values.reserve(masses.size());
  for (const auto& x : masses) values.push_back(x * scale);
  return GridDensity(spec, std::move(values));
}

GridDensity GridDensity::from_grid_measure(const GridMeasure& measure) {
  std::vector<Rational> masses;
  masses.reserve(measure.entries().size());
  for (std::size_t f = 0; f < measure.entries().size(); ++f) masses.push_back(measure.mass(f));
  return from_cell_masses(measure.spec(), masses);
}

GridDensity GridDensity::uniform(std::size_t n) { return GridDensity({n, 1}, {Rational(1)}); }

GridDensity GridDensity::refine(std::size_t factor) const {
  if (factor == 0) throw DomainError("refinement factor must be positive");
  if (factor == 1) return *this;
  GridDensity out;
  out.spec_ = {spec_.n, spec_.m * factor};
  out.values_.resize(out.spec_.cells());
  std::vector<std::size_t> idx(spec_.n);
  for (std::size_t f = 0; f < out.values_.size(); ++f) {
    unflatten(f, out.spec_.m, idx);
    for (auto& i : idx) i /= factor;
    out.values_[f] = values_[flat_index(idx, spec_.m)];
  }
  out.dvalues_ = to_doubles(out.values_);
  return out;
}

namespace {

template <class T>
T density_box_mass(const GridSpec& spec, const std::vector<T>& values, const BasicBox<T>& box) {
  if (box.lo.size() != spec.n || box.hi.size() != spec.n) throw DomainError("box dimension mismatch");
  const std::size_t m = spec.m;
  std::vector<std::vector<T>> overlap(spec.n, std::vector<T>(m, T(0)));
  std::vector<std::size_t> lo(spec.n, m), hi(spec.n, 0);
  for (std::size_t k = 0; k < spec.n; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      T left = T(static_cast<long>(j)) / T(static_cast<long>(m));
      T right = T(static_cast<long>(j + 1)) / T(static_cast<long>(m));
      T a = box.lo[k] > left ? box.lo[k] : left;
      T b = box.hi[k] < right ? box.hi[k] : right;
      if (b > a) {
        overlap[k][j] = b - a;
        lo[k] = std::min(lo[k], j);
        hi[k] = std::max(hi[k], j + 1);
      }
    }
  }
  T mass = T(0);
  for_each_index(lo, hi, [&](std::span<const std::size_t> idx) {
    T v = values[flat_index(idx, m)];
    if (v == 0) return;
    for (std::size_t k = 0; k < idx.size(); ++k) v *= overlap[k][idx[k]];
    mass += v;
  });
  return mass;
}

}  // namespace

double GridDensity::box_mass(const Box& box) const { return density_box_mass(spec_, dvalues_, box); }

Rational GridDensity::box_mass(const RBox& box) const {
  return density_box_mass(spec_, values_, box);
}

bool GridDensity::same_function(const GridDensity& other) const {
  if (spec_.n != other.spec_.n) return false;
  const std::size_t common = std::lcm(spec_.m, other.spec_.m);
  return refine(common / spec_.m).values_ == other.refine(common / other.spec_.m).values_;
}

}  // namespace xcop
