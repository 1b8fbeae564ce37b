#include "xcop/measure_ops.hpp"

#include "xcop/errors.hpp"
#include "xcop/grid.hpp"
#include "xcop/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <variant>

namespace xcop {

double cdf_eval(const CopulaModel& c, std::span<const double> u) { return c.cdf(u); }

namespace {

void check_axis(const CopulaModel& c, std::size_t axis, std::size_t m) {
  if (axis >= c.dim()) throw DomainError("axis out of range");
  if (m == 0) throw DomainError("resolution must be at least 1");
}

template <class T>
BasicBox<T> slab_box(std::size_t n, std::size_t axis, std::size_t j, std::size_t m) {
  BasicBox<T> box{std::vector<T>(n, T(0)), std::vector<T>(n, T(1))};
  box.lo[axis] = T(static_cast<long>(j)) / T(static_cast<long>(m));
  box.hi[axis] = T(static_cast<long>(j + 1)) / T(static_cast<long>(m));
  return box;
}

void check_normalized(const CopulaModel& c) {
  const auto& rep = c.representation();
  if (const auto* s = std::get_if<SegmentMeasure>(&rep); s && !s->is_normalized()) {
    throw DomainError("weights not normalized (total " + to_string(s->total_weight()) + ")");
  }
  if (const auto* mm = std::get_if<MixedMeasure>(&rep); mm && mm->singular() && !mm->singular()->is_normalized()) {
    throw DomainError("weights not normalized in singular part");
  }
}

}  // namespace

std::vector<Rational> exact_marginal_slice_masses(const CopulaModel& c, std::size_t axis, std::size_t m) {
  check_axis(c, axis, m);
  const auto& rep = c.representation();
  if (const auto* s = std::get_if<SegmentMeasure>(&rep)) return s->slab_masses(axis, m);
  if (const auto* g = std::get_if<GraphMeasure>(&rep)) return g->map.to_segment_measure().slab_masses(axis, m);
  if (const auto* mm = std::get_if<MixedMeasure>(&rep)) {
    std::vector<Rational> out(m, Rational(0));
    if (mm->density()) {
      CopulaModel d(*mm->density());
      auto part = exact_marginal_slice_masses(d, axis, m);
      for (std::size_t j = 0; j < m; ++j) out[j] += mm->ac_weight() * part[j];
    }
    if (mm->singular()) {
      auto part = mm->singular()->slab_masses(axis, m);
      for (std::size_t j = 0; j < m; ++j) out[j] += (1 - mm->ac_weight()) * part[j];
    }
    return out;
  }
  std::vector<Rational> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) out.push_back(c.box_mass(slab_box<Rational>(c.dim(), axis, j, m)));
  return out;
}

std::vector<double> marginal_slice_masses(const CopulaModel& c, std::size_t axis, std::size_t m) {
  check_axis(c, axis, m);
  if (c.rational_backed()) return to_doubles(exact_marginal_slice_masses(c, axis, m));
  std::vector<double> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) out.push_back(c.box_mass(slab_box<double>(c.dim(), axis, j, m)));
  return out;
}

ValidationReport validate_copula_measure(const CopulaModel& c, std::size_t m, double tol) {
  if (m == 0) throw DomainError("resolution must be at least 1");
  check_normalized(c);
  ValidationReport report;
  report.exact = c.rational_backed();
  if (report.exact) {
    const Rational target(1, static_cast<long>(m));
    Rational worst = -1;
    for (std::size_t axis = 0; axis < c.dim(); ++axis) {
      auto masses = exact_marginal_slice_masses(c, axis, m);
      for (std::size_t j = 0; j < m; ++j) {
        Rational dev = abs(masses[j] - target);
        if (dev > worst) {
          worst = dev;
          report.worst_axis = axis;
          report.worst_slab = j;
        }
      }
    }
    report.max_deviation = to_double(worst);
    report.ok = worst == 0 || worst <= from_double(tol);
    return report;
  }
  const double target = 1.0 / static_cast<double>(m);
  double worst = -1.0;
  for (std::size_t axis = 0; axis < c.dim(); ++axis) {
    auto masses = marginal_slice_masses(c, axis, m);
    for (std::size_t j = 0; j < m; ++j) {
      double dev = std::abs(masses[j] - target);
      if (dev > worst) {
        worst = dev;
        report.worst_axis = axis;
        report.worst_slab = j;
      }
    }
  }
  report.max_deviation = worst;
  report.ok = worst <= tol;
  return report;
}

DinfResult dinf_distance(const CopulaModel& a, const CopulaModel& b, std::size_t r) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch in d_inf distance");
  if (r == 0) throw DomainError("lattice resolution must be at least 1");
  const std::size_t n = a.dim();
  DinfResult result;
  result.argmax.assign(n, 0.0);
  std::vector<std::size_t> lo(n, 0), hi(n, r + 1);
  Point u(n);
  for_each_index(lo, hi, [&](std::span<const std::size_t> idx) {
    for (std::size_t k = 0; k < n; ++k) u[k] = static_cast<double>(idx[k]) / static_cast<double>(r);
    double d = std::abs(a.cdf(u) - b.cdf(u));
    if (d > result.estimate) {
      result.estimate = d;
      result.argmax = u;
    }
  });
  result.certified_bound = result.estimate + static_cast<double>(n) / static_cast<double>(r);
  return result;
}

std::vector<Point> sample(const SegmentMeasure& measure, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out;
  if (count == 0) return out;
  if (measure.size() == 0) throw DomainError("cannot sample from an empty measure");
  std::vector<double> cumulative(measure.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    acc += measure.weight(i);
    cumulative[i] = acc;
  }
  if (!(acc > 0.0)) throw DomainError("cannot sample from a measure of zero mass");
  std::mt19937_64 rng(seed);
  out.reserve(count);
  const std::size_t n = measure.dim();
  for (std::size_t s = 0; s < count; ++s) {
    double pick = uniform01(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    std::size_t i = std::min(static_cast<std::size_t>(it - cumulative.begin()), measure.size() - 1);
    while (measure.weight(i) == 0.0 && i + 1 < measure.size()) ++i;
    double t = uniform01(rng);
    auto a = measure.start(i);
    auto b = measure.end(i);
    Point p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = std::clamp(a[k] + t * (b[k] - a[k]), 0.0, 1.0);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

template <class T>
std::vector<T> extract(const CopulaModel& c, std::size_t m) {
  if (m == 0) throw DomainError("resolution must be at least 1");
  const std::size_t n = c.dim();
  GridSpec spec{n, m};
  std::vector<T> out(spec.cells());
  std::vector<std::size_t> idx(n);
  BasicBox<T> box{std::vector<T>(n), std::vector<T>(n)};
  for (std::size_t f = 0; f < out.size(); ++f) {
    unflatten(f, m, idx);
    for (std::size_t k = 0; k < n; ++k) {
      box.lo[k] = T(static_cast<long>(idx[k])) / T(static_cast<long>(m));
      box.hi[k] = T(static_cast<long>(idx[k] + 1)) / T(static_cast<long>(m));
    }
    out[f] = c.box_mass(box);
  }
  return out;
}

}  // namespace

std::vector<double> grid_extract(const CopulaModel& c, std::size_t m) { return extract<double>(c, m); }

std::vector<Rational> grid_extract_exact(const CopulaModel& c, std::size_t m) {
  return extract<Rational>(c, m);
}

}  // namespace xcop
