#include "xcop/pl_map.hpp"

#include "xcop/errors.hpp"

#include <algorithm>
#include <string>

namespace xcop {

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<Rational> breakpoints,
                                       std::vector<std::vector<AffinePiece>> pieces,
                                       bool rational_backed)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), rational_backed_(rational_backed) {
  if (breakpoints_.size() < 2) throw DomainError("a piecewise-linear map needs at least two breakpoints");
  if (breakpoints_.front() != 0 || breakpoints_.back() != 1) {
    throw DomainError("breakpoints must start at 0 and end at 1");
  }
  for (std::size_t j = 0; j + 1 < breakpoints_.size(); ++j) {
    if (!(breakpoints_[j] < breakpoints_[j + 1])) throw DomainError("breakpoints must be strictly increasing");
  }
  if (pieces_.size() != breakpoints_.size() - 1) {
    throw DomainError("expected one piece per breakpoint interval");
  }
  coords_ = pieces_.front().size();
  if (coords_ == 0) throw DomainError("a piecewise-linear map needs at least one coordinate");
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    if (pieces_[j].size() != coords_) throw DomainError("every piece must define every coordinate");
    for (std::size_t c = 0; c < coords_; ++c) {
      const auto& p = pieces_[j][c];
      Rational left = p.slope * breakpoints_[j] + p.intercept;
      Rational right = p.slope * breakpoints_[j + 1] + p.intercept;
      if (left < 0 || left > 1 || right < 0 || right > 1) {
        throw DomainError("coordinate " + std::to_string(c + 2) + " leaves [0,1] on piece " +
                          std::to_string(j));
      }
    }
  }
  dbreaks_ = to_doubles(breakpoints_);
  for (const auto& row : pieces_) {
    for (const auto& p : row) {
      dslope_.push_back(to_double(p.slope));
      dintercept_.push_back(to_double(p.intercept));
    }
  }
}

PiecewiseLinearMap PiecewiseLinearMap::identity(std::size_t n) {
  if (n < 2) throw DomainError("dimension must be at least 2");
  return PiecewiseLinearMap({Rational(0), Rational(1)}, {std::vector<AffinePiece>(n - 1, {1, 0})});
}

PiecewiseLinearMap PiecewiseLinearMap::interpolate(
    std::size_t n, std::vector<Rational> breakpoints,
    const std::function<Rational(std::size_t, const Rational&)>& fn) {
  if (n < 2) throw DomainError("dimension must be at least 2");
  std::vector<std::vector<AffinePiece>> pieces;
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
    std::vector<AffinePiece> row;
    const Rational& x0 = breakpoints[j];
    const Rational& x1 = breakpoints[j + 1];
    for (std::size_t c = 0; c + 1 < n; ++c) {
      Rational y0 = fn(c, x0);
      Rational y1 = fn(c, x1);
      Rational slope = (y1 - y0) / (x1 - x0);
      row.push_back({slope, y0 - slope * x0});
    }
    pieces.push_back(std::move(row));
  }
  return PiecewiseLinearMap(std::move(breakpoints), std::move(pieces));
}

std::size_t PiecewiseLinearMap::locate(const Rational& x) const {
  if (x < 0 || x > 1) throw DomainError("argument outside [0,1]");
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - breakpoints_.begin());
  return std::min(j == 0 ? 0 : j - 1, pieces_.size() - 1);
}

Rational PiecewiseLinearMap::value(std::size_t coord, const Rational& x) const {
  const auto& p = pieces_[locate(x)][coord];
  return p.slope * x + p.intercept;
}

double PiecewiseLinearMap::value(std::size_t coord, double x) const {
  if (x < 0.0 || x > 1.0) throw DomainError("argument outside [0,1]");
  auto it = std::upper_bound(dbreaks_.begin(), dbreaks_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - dbreaks_.begin());
  j = std::min(j == 0 ? 0 : j - 1, pieces_.size() - 1);
  return dslope_[j * coords_ + coord] * x + dintercept_[j * coords_ + coord];
}

Rational PiecewiseLinearMap::preimage_length(std::size_t coord, const Rational& lo,
                                             const Rational& hi) const {
  Rational total = 0;
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    const auto& p = pieces_[j][coord];
    const Rational& x0 = breakpoints_[j];
    const Rational& x1 = breakpoints_[j + 1];
    if (p.slope == 0) {
      bool inside = p.intercept >= lo && (p.intercept < hi || (hi == 1 && p.intercept == 1));
      if (inside) total += x1 - x0;
      continue;
    }
    Rational a = (lo - p.intercept) / p.slope;
    Rational b = (hi - p.intercept) / p.slope;
    if (a > b) std::swap(a, b);
    Rational left = a > x0 ? a : x0;
    Rational right = b < x1 ? b : x1;
    if (right > left) total += right - left;
  }
  return total;
}

namespace {

template <class T>
T graph_box_mass(const std::vector<T>& breaks, const std::vector<T>& slope, const std::vector<T>& intercept,
                 std::size_t coords, const BasicBox<T>& box) {
  if (box.lo.size() != coords + 1 || box.hi.size() != coords + 1) throw DomainError("box dimension mismatch");
  T total = T(0);
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    T left = breaks[j] > box.lo[0] ? breaks[j] : box.lo[0];
    T right = breaks[j + 1] < box.hi[0] ? breaks[j + 1] : box.hi[0];
    for (std::size_t c = 0; c < coords && right > left; ++c) {
      const T& s = slope[j * coords + c];
      const T& b = intercept[j * coords + c];
      const T& lo = box.lo[c + 1];
      const T& hi = box.hi[c + 1];
      if (s == 0) {
        if (b < lo || b > hi) right = left;
        continue;
      }
      T a0 = (lo - b) / s;
      T a1 = (hi - b) / s;
      if (a0 > a1) std::swap(a0, a1);
      if (a0 > left) left = a0;
      if (a1 < right) right = a1;
    }
    if (right > left) total += right - left;
  }
  return total;
}

}  // namespace

double PiecewiseLinearMap::box_mass(const Box& box) const {
  return graph_box_mass(dbreaks_, dslope_, dintercept_, coords_, box);
}

Rational PiecewiseLinearMap::box_mass(const RBox& box) const {
  std::vector<Rational> slope, intercept;
  for (const auto& row : pieces_) {
    for (const auto& p : row) {
      slope.push_back(p.slope);
      intercept.push_back(p.intercept);
    }
  }
  return graph_box_mass(breakpoints_, slope, intercept, coords_, box);
}

std::optional<PushforwardDefect> PiecewiseLinearMap::pushforward_defect() const {
  for (std::size_t c = 0; c < coords_; ++c) {
    // A flat piece of positive length is an atom of the pushforward.
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
      const auto& p = pieces_[j][c];
      if (p.slope == 0) {
        return PushforwardDefect{c, {p.intercept, p.intercept}, breakpoints_[j + 1] - breakpoints_[j]};
      }
    }
    std::vector<Rational> ys{Rational(0), Rational(1)};
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
      const auto& p = pieces_[j][c];
      ys.push_back(p.slope * breakpoints_[j] + p.intercept);
      ys.push_back(p.slope * breakpoints_[j + 1] + p.intercept);
    }
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
      const Rational mid = (ys[i] + ys[i + 1]) / 2;
      Rational density = 0;
      for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const auto& p = pieces_[j][c];
        Rational y0 = p.slope * breakpoints_[j] + p.intercept;
        Rational y1 = p.slope * breakpoints_[j + 1] + p.intercept;
        if (y0 > y1) std::swap(y0, y1);
        if (y0 < mid && mid < y1) density += 1 / abs(p.slope);
      }
      if (density != 1) {
        return PushforwardDefect{c, {ys[i], ys[i + 1]}, density * (ys[i + 1] - ys[i])};
      }
    }
  }
  return std::nullopt;
}

SegmentMeasure PiecewiseLinearMap::to_segment_measure() const {
  std::vector<Segment> segments;
  segments.reserve(pieces_.size());
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    Segment s;
    s.a.push_back(breakpoints_[j]);
    s.b.push_back(breakpoints_[j + 1]);
    for (std::size_t c = 0; c < coords_; ++c) {
      const auto& p = pieces_[j][c];
      s.a.push_back(p.slope * breakpoints_[j] + p.intercept);
      s.b.push_back(p.slope * breakpoints_[j + 1] + p.intercept);
    }
    s.weight = breakpoints_[j + 1] - breakpoints_[j];
    segments.push_back(std::move(s));
  }
  return SegmentMeasure(dim(), std::move(segments), rational_backed_);
}

}  // namespace xcop
