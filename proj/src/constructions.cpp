#include "xcop/constructions.hpp"

#include <algorithm>
#include <set>

namespace xcop {

Orientation::Orientation(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw DomainError("orientation must have at least one axis");
  if (signs_.front() != 1) throw DomainError("orientation must start with +");
  for (int s : signs_)
    if (s != 1 && s != -1) throw DomainError("orientation signs must be +1 or -1");
}

Orientation Orientation::from_code(std::size_t n, std::uint32_t code) {
  std::vector<int> signs(n, 1);
  for (std::size_t k = 1; k < n; ++k)
    if (code & (1u << (k - 1))) signs[k] = -1;
  return Orientation(std::move(signs));
}

Orientation Orientation::parse(std::string_view text) {
  std::vector<int> signs;
  for (char c : text) {
    if (c == '+') {
      signs.push_back(1);
    } else if (c == '-') {
      signs.push_back(-1);
    } else {
      throw DomainError("orientation must be a string of '+' and '-'");
    }
  }
  return Orientation(std::move(signs));
}

std::uint32_t Orientation::code() const {
  std::uint32_t c = 0;
  for (std::size_t k = 1; k < signs_.size(); ++k)
    if (signs_[k] < 0) c |= 1u << (k - 1);
  return c;
}

std::string Orientation::str() const {
  std::string s;
  for (int x : signs_) s.push_back(x > 0 ? '+' : '-');
  return s;
}

std::pair<RPoint, RPoint> interior_diagonal(const RPoint& lo, const RPoint& hi, const Orientation& o) {
  if (lo.size() != o.dim() || hi.size() != o.dim()) throw DomainError("orientation dimension mismatch");
  RPoint a(lo.size()), b(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) {
    a[k] = o.signs()[k] > 0 ? lo[k] : hi[k];
    b[k] = o.signs()[k] > 0 ? hi[k] : lo[k];
  }
  return {std::move(a), std::move(b)};
}

SegmentMeasure tent_copula(const Rational& t, std::size_t n) {
  if (!(t > 0 && t < 1)) throw DomainError("tent parameter must lie in (0,1)");
  if (n < 2) throw DomainError("dimension must be at least 2");
  RPoint origin(n, Rational(0));
  RPoint peak(n, Rational(1));
  peak[0] = t;
  RPoint foot(n, Rational(0));
  foot[0] = 1;
  return SegmentMeasure(n, {{origin, peak, t}, {peak, foot, 1 - t}});
}

SegmentMeasure shuffle_copula(std::size_t n, const std::vector<Rational>& breaks,
                              const std::vector<Orientation>& orientations) {
  if (n < 2) throw DomainError("dimension must be at least 2");
  if (breaks.size() < 2 || breaks.front() != 0 || breaks.back() != 1) {
    throw DomainError("shuffle breaks must run from 0 to 1");
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) throw DomainError("shuffle breaks must be strictly increasing");
  }
  const std::size_t blocks = breaks.size() - 1;
  if (!orientations.empty() && orientations.size() != blocks) {
    throw DomainError("need one orientation per shuffle block");
  }
  std::vector<Segment> segments;
  segments.reserve(blocks);
  for (std::size_t i = 0; i < blocks; ++i) {
    RPoint lo(n, Rational(0)), hi(n, Rational(1));
    lo[0] = breaks[i];
    hi[0] = breaks[i + 1];
    auto [a, b] = interior_diagonal(lo, hi, orientations.empty() ? Orientation::all_plus(n) : orientations[i]);
    segments.push_back({std::move(a), std::move(b), breaks[i + 1] - breaks[i]});
  }
  return SegmentMeasure(n, std::move(segments));
}

SegmentMeasure countable_shuffle_copula(std::size_t n, const std::function<Rational(std::size_t)>& term,
                                        const Rational& limit, const Rational& tail_tolerance,
                                        std::size_t max_terms) {
  if (!(limit > 0 && limit <= 1)) throw DomainError("sequence limit must lie in (0,1]");
  if (!(tail_tolerance > 0)) throw DomainError("tail tolerance must be positive");
  std::vector<Rational> breaks{Rational(0)};
  Rational previous = term(1);
  if (previous != 0) throw DomainError("the sequence must start at 0");
  for (std::size_t i = 2; limit - previous >= tail_tolerance; ++i) {
    if (i > max_terms) throw DomainError("sequence did not approach its limit within the term budget");
    Rational next = term(i);
    if (next < previous || next > limit) throw DomainError("sequence must be non-decreasing and bounded by its limit");
    if (next > previous) breaks.push_back(next);
    previous = next;
  }
  if (limit > breaks.back()) breaks.push_back(limit);
  if (breaks.back() < 1) breaks.push_back(Rational(1));
  return shuffle_copula(n, breaks);
}

SegmentMeasure permutation_copula(const PermutationCopulaSpec& spec) {
  const std::size_t n = spec.dim();
  const std::size_t m = spec.m;
  if (n < 2) throw DomainError("a permutation copula needs at least one permutation");
  if (m == 0) throw DomainError("permutation copula order must be at least 1");
  for (std::size_t k = 0; k < spec.perms.size(); ++k) {
    const auto& perm = spec.perms[k];
    std::vector<bool> seen(m, false);
    if (perm.size() != m) throw DomainError("permutation " + std::to_string(k + 2) + " has wrong length");
    for (std::size_t v : perm) {
      if (v >= m || seen[v]) throw DomainError("permutation " + std::to_string(k + 2) + " is not a bijection");
      seen[v] = true;
    }
  }
  if (!spec.orientations.empty() && spec.orientations.size() != m) {
    throw DomainError("need one orientation per permutation-copula cell");
  }
  const Rational width(1, static_cast<long>(m));
  std::vector<Segment> segments;
  segments.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    RPoint lo(n), hi(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t cell = k == 0 ? i : spec.perms[k - 1][i];
      lo[k] = width * cell;
      hi[k] = lo[k] + width;
    }
    auto [a, b] = interior_diagonal(lo, hi, spec.orientations.empty() ? Orientation::all_plus(n) : spec.orientations[i]);
    segments.push_back({std::move(a), std::move(b), width});
  }
  return SegmentMeasure(n, std::move(segments));
}

namespace {

Rational ceil_rational(const Rational& x) { return -floor(-x); }

/// Splits every segment at the given parameter cuts and maps each piece with
/// `move(point_at_mid, axis)` offsets.
template <class CutFn, class OffsetFn>
SegmentMeasure split_and_move(const SegmentMeasure& c, CutFn&& cuts_for, OffsetFn&& offset_at) {
  const std::size_t n = c.dim();
  std::vector<Segment> out;
  for (const auto& s : c.segments()) {
    std::vector<Rational> ts{Rational(0), Rational(1)};
    cuts_for(s, ts);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (std::size_t p = 0; p + 1 < ts.size(); ++p) {
      const Rational& t0 = ts[p];
      const Rational& t1 = ts[p + 1];
      const Rational mid = (t0 + t1) / 2;
      Segment piece;
      piece.a.resize(n);
      piece.b.resize(n);
      for (std::size_t k = 0; k < n; ++k) {
        const Rational d = s.b[k] - s.a[k];
        const Rational x0 = s.a[k] + t0 * d;
        const Rational x1 = s.a[k] + t1 * d;
        const Rational offset = offset_at(k, s.a[k] + mid * d);
        piece.a[k] = x0 + offset;
        piece.b[k] = x1 + offset;
      }
      piece.weight = s.weight * (t1 - t0);
      out.push_back(std::move(piece));
    }
  }
  return SegmentMeasure(n, std::move(out), c.rational_backed());
}

}  // namespace

SegmentMeasure shift_transform(const SegmentMeasure& c, const std::vector<Rational>& alpha) {
  const std::size_t n = c.dim();
  if (alpha.size() != n) throw DomainError("shift vector has wrong dimension");
  std::vector<Rational> shift(n);
  for (std::size_t k = 0; k < n; ++k) shift[k] = alpha[k] - floor(alpha[k]);

  auto cuts = [&](const Segment& s, std::vector<Rational>& ts) {
    for (std::size_t k = 0; k < n; ++k) {
      const Rational d = s.b[k] - s.a[k];
      if (d == 0) continue;
      const Rational x0 = s.a[k] - shift[k];
      const Rational x1 = s.b[k] - shift[k];
      Rational lo = x0 < x1 ? x0 : x1;
      Rational hi = x0 < x1 ? x1 : x0;
      for (Rational z = ceil_rational(lo); z <= hi; z += 1) {
        Rational t = (z - x0) / d;
        if (t > 0 && t < 1) ts.push_back(t);
      }
    }
  };
  auto offset = [&](std::size_t k, const Rational& x_mid) {
    return Rational(-shift[k] - floor(x_mid - shift[k]));
  };
  return split_and_move(c, cuts, offset);
}

SegmentMeasure swap_transform(const SegmentMeasure& c, std::size_t axis, const Rational& a,
                              const Rational& b, const Rational& delta) {
  if (axis >= c.dim()) throw DomainError("swap axis out of range");
  if (!(delta > 0)) throw DomainError("swap width must be positive");
  if (a < 0 || b < 0 || a + delta > 1 || b + delta > 1) throw DomainError("swap slabs must lie in [0,1]");
  if (abs(a - b) < delta) throw DomainError("swap slabs overlap");

  const std::vector<Rational> edges{a, a + delta, b, b + delta};
  auto cuts = [&](const Segment& s, std::vector<Rational>& ts) {
    const Rational d = s.b[axis] - s.a[axis];
    if (d == 0) return;
    for (const auto& e : edges) {
      Rational t = (e - s.a[axis]) / d;
      if (t > 0 && t < 1) ts.push_back(t);
    }
  };
  auto offset = [&](std::size_t k, const Rational& x_mid) {
    if (k != axis) return Rational(0);
    if (x_mid >= a && x_mid <= a + delta) return Rational(b - a);
    if (x_mid >= b && x_mid <= b + delta) return Rational(a - b);
    return Rational(0);
  };
  return split_and_move(c, cuts, offset);
}

SegmentMeasure four_line_3d() {
  const Rational h(1, 2);
  const Rational q(1, 4);
  const Rational z(0), one(1);
  return SegmentMeasure(3, {
                               {{z, z, h}, {h, h, one}, q},
                               {{h, h, h}, {one, one, one}, q},
                               {{z, h, z}, {h, one, h}, q},
                               {{h, z, z}, {one, h, h}, q},
                           });
}

NotMeasurePreserving::NotMeasurePreserving(PushforwardDefect defect)
    : DomainError("map is not measure preserving: coordinate " + std::to_string(defect.coord + 2) +
                  " has preimage measure " + to_string(defect.preimage_length) + " on [" +
                  to_string(defect.interval.lo) + ", " + to_string(defect.interval.hi) + "]"),
      defect_(std::move(defect)) {}

CopulaModel graph_copula(const PiecewiseLinearMap& f) {
  if (auto defect = f.pushforward_defect()) throw NotMeasurePreserving(std::move(*defect));
  return GraphMeasure{f};
}

MeasurePreservingReport measure_preserving_check(const PiecewiseLinearMap& f, std::size_t r) {
  if (r == 0) throw DomainError("resolution must be at least 1");
  MeasurePreservingReport report;
  report.coord_ok.assign(f.coords(), true);
  const Rational width(1, static_cast<long>(r));
  const Rational tol = from_double(1e-12);
  Rational worst = -1;
  for (std::size_t c = 0; c < f.coords(); ++c) {
    for (std::size_t j = 0; j < r; ++j) {
      const Rational lo = width * j;
      const Rational hi = lo + width;
      const Rational pre = f.preimage_length(c, lo, hi);
      const Rational dev = abs(pre - width);
      if (dev > tol) report.coord_ok[c] = false;
      if (dev > worst) {
        worst = dev;
        report.witness_coord = c;
        report.witness = {lo, hi};
        report.witness_preimage = pre;
      }
    }
  }
  report.max_deviation = to_double(worst);
  report.ok = std::all_of(report.coord_ok.begin(), report.coord_ok.end(), [](bool b) { return b; });
  return report;
}

}  // namespace xcop
