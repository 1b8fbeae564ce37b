#include "xcop/copula_model.hpp"

#include "xcop/errors.hpp"

#include <algorithm>
#include <type_traits>

namespace xcop {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

template <class T>
T analytic_cdf(const CopulaModel::Representation& rep, std::span<const T> u) {
  return std::visit(
      Overloaded{
          [&](const Independence&) {
            T p = T(1);
            for (const auto& x : u) p *= x;
            return p;
          },
          [&](const Comonotone&) { return *std::min_element(u.begin(), u.end()); },
          [&](const Countermonotone&) {
            T s = u[0] + u[1] - T(1);
            return s > 0 ? s : T(0);
          },
          [&](const Fgm& f) {
            T theta;
            if constexpr (std::is_same_v<T, double>) {
              theta = to_double(f.theta);
            } else {
              theta = f.theta;
            }
            return u[0] * u[1] * (T(1) + theta * (T(1) - u[0]) * (T(1) - u[1]));
          },
          [&](const auto&) -> T { throw DomainError("not an analytic family"); },
      },
      rep);
}

template <class T>
T inclusion_exclusion(const CopulaModel::Representation& rep, const BasicBox<T>& box) {
  const std::size_t n = box.dim();
  std::vector<T> corner(n);
  T total = T(0);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int lows = 0;
    bool zero = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::size_t{1} << k)) {
        corner[k] = box.lo[k];
        ++lows;
      } else {
        corner[k] = box.hi[k];
      }
      if (corner[k] == 0) zero = true;
    }
    if (zero) continue;
    T c = analytic_cdf<T>(rep, std::span<const T>(corner));
    if (lows % 2 == 0) {
      total += c;
    } else {
      total -= c;
    }
  }
  return total;
}

template <class T>
void check_unit_box(const BasicBox<T>& box, std::size_t n) {
  if (box.lo.size() != n || box.hi.size() != n) throw DomainError("box dimension mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    if (box.lo[k] < 0 || box.hi[k] > 1 || box.lo[k] > box.hi[k]) {
      throw DomainError("box must satisfy 0 <= lo <= hi <= 1");
    }
  }
}

template <class T>
T model_box_mass(const CopulaModel::Representation& rep, std::size_t n, const BasicBox<T>& box) {
  check_unit_box(box, n);
  return std::visit(
      Overloaded{
          [&](const SegmentMeasure& s) -> T { return s.box_mass(box); },
          [&](const GridDensity& d) -> T { return d.box_mass(box); },
          [&](const MixedMeasure& m) -> T { return m.box_mass(box); },
          [&](const GraphMeasure& g) -> T { return g.map.box_mass(box); },
          [&](const auto&) -> T { return inclusion_exclusion(rep, box); },
      },
      rep);
}

}  // namespace

MixedMeasure::MixedMeasure(Rational ac_weight, std::optional<GridDensity> density,
                           std::optional<SegmentMeasure> singular)
    : ac_weight_(std::move(ac_weight)), density_(std::move(density)), singular_(std::move(singular)) {
  if (ac_weight_ < 0 || ac_weight_ > 1) throw DomainError("ac_weight must lie in [0,1]");
  if ((ac_weight_ > 0) != density_.has_value()) {
    throw DomainError("a density is required exactly when ac_weight > 0");
  }
  if ((ac_weight_ < 1) != singular_.has_value()) {
    throw DomainError("a singular part is required exactly when ac_weight < 1");
  }
  if (density_ && singular_ && density_->spec().n != singular_->dim()) {
    throw DomainError("density and singular part differ in dimension");
  }
}

std::size_t MixedMeasure::dim() const { return density_ ? density_->spec().n : singular_->dim(); }

double MixedMeasure::box_mass(const Box& box) const {
  const double w = to_double(ac_weight_);
  double mass = 0.0;
  if (density_) mass += w * density_->box_mass(box);
  if (singular_) mass += (1.0 - w) * singular_->box_mass(box);
  return mass;
}

Rational MixedMeasure::box_mass(const RBox& box) const {
  Rational mass = 0;
  if (density_) mass += ac_weight_ * density_->box_mass(box);
  if (singular_) mass += (1 - ac_weight_) * singular_->box_mass(box);
  return mass;
}

CopulaModel::CopulaModel(Independence c) : rep_(c) {
  if (c.n < 2) throw DomainError("dimension must be at least 2");
}

CopulaModel::CopulaModel(Comonotone c) : rep_(c) {
  if (c.n < 2) throw DomainError("dimension must be at least 2");
}

CopulaModel::CopulaModel(Fgm c) : rep_(c) {
  if (c.theta < -1 || c.theta > 1) throw DomainError("FGM parameter must lie in [-1,1]");
}

std::size_t CopulaModel::dim() const {
  return std::visit(Overloaded{
                        [](const SegmentMeasure& s) { return s.dim(); },
                        [](const GridDensity& d) { return d.spec().n; },
                        [](const MixedMeasure& m) { return m.dim(); },
                        [](const GraphMeasure& g) { return g.map.dim(); },
                        [](const Independence& c) { return c.n; },
                        [](const Comonotone& c) { return c.n; },
                        [](const auto&) { return std::size_t{2}; },
                    },
                    rep_);
}

bool CopulaModel::rational_backed() const {
  return std::visit(Overloaded{
                        [](const SegmentMeasure& s) { return s.rational_backed(); },
                        [](const MixedMeasure& m) { return !m.singular() || m.singular()->rational_backed(); },
                        [](const GraphMeasure& g) { return g.map.rational_backed(); },
                        [](const auto&) { return true; },
                    },
                    rep_);
}

std::string CopulaModel::describe() const {
  return std::visit(Overloaded{
                        [](const SegmentMeasure& s) { return "segment measure (" + std::to_string(s.size()) + " segments)"; },
                        [](const GridDensity& d) { return "grid density (m=" + std::to_string(d.spec().m) + ")"; },
                        [](const MixedMeasure&) { return std::string("mixed measure"); },
                        [](const GraphMeasure&) { return std::string("graph copula"); },
                        [](const Independence&) { return std::string("independence copula"); },
                        [](const Comonotone&) { return std::string("comonotone copula"); },
                        [](const Countermonotone&) { return std::string("countermonotone copula"); },
                        [](const Fgm& f) { return "FGM copula (theta=" + to_string(f.theta) + ")"; },
                    },
                    rep_);
}

namespace {

template <class T>
void check_point(std::span<const T> u, std::size_t n) {
  if (u.size() != n) throw DomainError("point dimension mismatch");
  for (const auto& x : u) {
    if (!(x >= 0 && x <= 1)) throw DomainError("CDF argument outside [0,1]^n");
  }
}

}  // namespace

double CopulaModel::cdf(std::span<const double> u) const {
  check_point(u, dim());
  return model_box_mass(rep_, dim(), lower_orthant(u));
}

Rational CopulaModel::cdf(std::span<const Rational> u) const {
  check_point(u, dim());
  return model_box_mass(rep_, dim(), lower_orthant(u));
}

double CopulaModel::box_mass(const Box& box) const { return model_box_mass(rep_, dim(), box); }

Rational CopulaModel::box_mass(const RBox& box) const { return model_box_mass(rep_, dim(), box); }

}  // namespace xcop
