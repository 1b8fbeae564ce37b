#include "xcop/segment_measure.hpp"

#include "xcop/errors.hpp"

#include <cmath>
#include <string>

namespace xcop {

std::vector<Interval> merge_intervals(std::vector<Interval> xs) {
  std::sort(xs.begin(), xs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (auto& x : xs) {
    if (!out.empty() && x.lo <= out.back().hi) {
      if (x.hi > out.back().hi) out.back().hi = x.hi;
    } else {
      out.push_back(std::move(x));
    }
  }
  return out;
}

SegmentMeasure::SegmentMeasure(std::size_t n, std::vector<Segment> segments, bool rational_backed)
    : n_(n), segments_(std::move(segments)), rational_backed_(rational_backed) {
  if (n_ < 2) throw DomainError("segment measure dimension must be at least 2");
  da_.reserve(n_ * segments_.size());
  db_.reserve(n_ * segments_.size());
  dw_.reserve(segments_.size());
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (s.a.size() != n_ || s.b.size() != n_) {
      throw DomainError("segment " + std::to_string(i) + " has wrong dimension");
    }
    if (s.weight < 0) throw DomainError("segment " + std::to_string(i) + " has negative weight");
    for (std::size_t k = 0; k < n_; ++k) {
      if (s.a[k] < 0 || s.a[k] > 1 || s.b[k] < 0 || s.b[k] > 1) {
        throw DomainError("segment " + std::to_string(i) + " leaves the unit cube");
      }
    }
    if (s.weight > 0 && s.a == s.b) {
      throw DomainError("segment " + std::to_string(i) + " is a point carrying positive mass");
    }
    for (const auto& x : s.a) da_.push_back(to_double(x));
    for (const auto& x : s.b) db_.push_back(to_double(x));
    dw_.push_back(to_double(s.weight));
  }
}

Rational SegmentMeasure::total_weight() const {
  Rational sum = 0;
  for (const auto& s : segments_) sum += s.weight;
  return sum;
}

bool SegmentMeasure::is_normalized() const {
  Rational sum = total_weight();
  if (rational_backed_) return sum == 1;
  return std::abs(to_double(sum) - 1.0) <= 1e-12;
}

namespace {

template <class T>
void check_box(const BasicBox<T>& box, std::size_t n) {
  if (box.lo.size() != n || box.hi.size() != n) throw DomainError("box dimension mismatch");
}

}  // namespace

double SegmentMeasure::box_mass(const Box& box) const {
  check_box(box, n_);
  double mass = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (dw_[i] == 0.0) continue;
    mass += dw_[i] * segment_fraction(da_.data() + i * n_, db_.data() + i * n_, box.lo.data(),
                                      box.hi.data(), n_);
  }
  return mass;
}

Rational SegmentMeasure::box_mass(const RBox& box) const {
  check_box(box, n_);
  Rational mass = 0;
  for (const auto& s : segments_) {
    if (s.weight == 0) continue;
    mass += s.weight * segment_fraction(s.a.data(), s.b.data(), box.lo.data(), box.hi.data(), n_);
  }
  return mass;
}

double SegmentMeasure::cdf(std::span<const double> u) const { return box_mass(lower_orthant(u)); }

Rational SegmentMeasure::cdf(std::span<const Rational> u) const {
  return box_mass(lower_orthant(u));
}

std::vector<Rational> SegmentMeasure::slab_masses(std::size_t axis, std::size_t m) const {
  if (axis >= n_) throw DomainError("axis out of range");
  if (m == 0) throw DomainError("resolution must be positive");
  std::vector<Rational> out(m, Rational(0));
  const Rational width(1, static_cast<long>(m));
  for (const auto& s : segments_) {
    if (s.weight == 0) continue;
    const Rational& x0 = s.a[axis];
    const Rational& x1 = s.b[axis];
    if (x0 == x1) {
      std::size_t j = floor_int(x0 * m).convert_to<std::size_t>();
      out[std::min(j, m - 1)] += s.weight;
      continue;
    }
    const Rational lo = x0 < x1 ? x0 : x1;
    const Rational hi = x0 < x1 ? x1 : x0;
    const Rational scale = s.weight / (hi - lo);
    for (std::size_t j = std::min(floor_int(lo * m).convert_to<std::size_t>(), m - 1); j < m; ++j) {
      Rational left = width * j;
      if (left >= hi) break;
      Rational right = left + width;
      Rational overlap = (right < hi ? right : hi) - (left > lo ? left : lo);
      if (overlap > 0) out[j] += scale * overlap;
    }
  }
  return out;
}

}  // namespace xcop
