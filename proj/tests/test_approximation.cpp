#include "generators.hpp"

#include "xcop/approximation.hpp"
#include "xcop/constructions.hpp"
#include "xcop/extremality.hpp"
#include "xcop/measure_ops.hpp"

#include <doctest.h>

#include <cmath>

using namespace xcop;

namespace {

/// Random real mixture of permutation tensors, stochastic up to rounding.
std::vector<double> random_stochastic(gen::Rng& rng, std::size_t n, std::size_t m, std::size_t terms) {
  std::vector<double> lambda(terms);
  double total = 0;
  for (auto& l : lambda) total += (l = uniform01(rng) + 1e-3);
  std::vector<double> M(ipow(m, n), 0.0);
  std::vector<std::size_t> idx(n);
  for (std::size_t r = 0; r < terms; ++r) {
    std::vector<std::vector<std::size_t>> perms;
    for (std::size_t a = 1; a < n; ++a) perms.push_back(gen::permutation(rng, m));
    for (std::size_t i = 0; i < m; ++i) {
      idx[0] = i;
      for (std::size_t a = 1; a < n; ++a) idx[a] = perms[a - 1][i];
      M[flat_index(idx, m)] += lambda[r] / total / static_cast<double>(m);
    }
  }
  return M;
}

void check_rationalized(const RationalizeResult& r, const std::vector<double>& M) {
  const GridSpec& spec = r.measure.spec();
  const std::int64_t slab = r.measure.denominator() / static_cast<std::int64_t>(spec.m);
  for (std::size_t axis = 0; axis < spec.n; ++axis)
    for (auto s : r.measure.slice_sums(axis)) CHECK(s == slab);
  Rational rho = 0;
  for (std::size_t f = 0; f < M.size(); ++f) {
    CHECK(r.measure.entry(f) >= 0);
    Rational d = abs(Rational(r.measure.mass(f) - from_double(M[f])));
    if (d > rho) rho = d;
  }
  CHECK(rho == r.rho);
  CHECK(r.rho * Rational(Integer(ipow(spec.m, spec.n + 1))) < 1);
}

}  // namespace

TEST_CASE("rationalize examples") {
  auto flat = rationalize({0.25, 0.25, 0.25, 0.25}, {2, 2}, 8);
  CHECK(flat.measure.entries() == std::vector<std::int64_t>{2, 2, 2, 2});
  CHECK(flat.rho == 0);

  auto mult = rationalize({0.3, 0.2, 0.2, 0.3}, {2, 2}, 40);
  CHECK(mult.measure.entries() == std::vector<std::int64_t>{12, 8, 8, 12});
  CHECK(to_double(mult.rho) < 1e-15);  // 0.3 is not a double

  const double a = 1 / std::sqrt(8.0);
  auto irr = rationalize({a, 0.5 - a, 0.5 - a, a}, {2, 2}, 40);
  CHECK(irr.measure.entries() == std::vector<std::int64_t>{14, 6, 6, 14});
  CHECK(to_double(irr.rho) == doctest::Approx(a - 14.0 / 40));
  CHECK(to_double(irr.rho) < 1.0 / 8);
}

TEST_CASE("rationalize errors") {
  CHECK_THROWS_AS(rationalize({0.5, 0.5, 0.0, 0.0}, {2, 2}, 8), DomainError);
  CHECK_THROWS_AS(rationalize({0.25, 0.25, 0.25, 0.25}, {2, 2}, 9), DomainError);
  CHECK_THROWS_AS(rationalize({0.25, 0.25, 0.25}, {2, 2}, 8), DomainError);

  const double a = 1 / std::sqrt(8.0);
  try {
    rationalize({a, 0.5 - a, 0.5 - a, a}, {2, 2}, 2, 0);
    FAIL("bound reported as met");
  } catch (const RationalizeError& e) {
    CHECK(e.rho() == doctest::Approx(0.5 - a));
  }
  // With retries the denominator grows until the bound holds.
  auto ok = rationalize({a, 0.5 - a, 0.5 - a, a}, {2, 2}, 2, 8);
  CHECK(ok.measure.denominator() > 2);
}

TEST_CASE("interval partition") {
  GridMeasure id({2, 2}, 2, {1, 0, 0, 1});
  auto ip = interval_partition(id);
  CHECK(ip.interval(0, 0) == Interval{0, Rational(1, 2)});
  CHECK(ip.interval(1, 3) == Interval{Rational(1, 2), 1});
  CHECK(ip.interval(0, 1).length() == 0);

  GridMeasure flat({2, 2}, 4, {1, 1, 1, 1});
  auto fp = interval_partition(flat);
  CHECK(fp.interval(0, 0) == Interval{0, Rational(1, 4)});
  CHECK(fp.interval(0, 1) == Interval{Rational(1, 4), Rational(1, 2)});
  CHECK(fp.interval(1, 0) == Interval{0, Rational(1, 4)});
  CHECK(fp.interval(1, 2) == Interval{Rational(1, 4), Rational(1, 2)});
}

TEST_CASE("assemble") {
  GridMeasure id({2, 2}, 2, {1, 0, 0, 1});
  auto a = assemble(id, interval_partition(id));
  CHECK(a.measure == permutation_copula({2, {{0, 1}}, {}}));
  CHECK(a.order == 2);

  GridMeasure flat({2, 2}, 4, {1, 1, 1, 1});
  auto f = assemble(flat, interval_partition(flat));
  REQUIRE(f.measure.size() == 4);
  for (const auto& s : f.measure.segments()) CHECK(s.weight == Rational(1, 4));
  for (std::size_t axis = 0; axis < 2; ++axis)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        const auto& s = f.measure[i];
        const auto& t = f.measure[j];
        CHECK((s.b[axis] <= t.a[axis] || t.b[axis] <= s.a[axis]));
      }
  CHECK(validate_copula_measure(f.measure, 4, 0.0).ok);
}

TEST_CASE("approximate") {
  for (std::size_t m : {1, 3, 8}) {
    auto r = approximate(CopulaModel::comonotone(2), m);
    CHECK(r.lattice_dinf <= 1e-12);
    CHECK(r.certified_bound == doctest::Approx(5.0 / m));
  }
  auto pi = approximate(CopulaModel::independence(2), 16);
  CHECK(pi.lattice_dinf <= 0.3125);
  CHECK(pi.certified_bound == 0.3125);
  auto fgm = approximate(CopulaModel::fgm(1), 16);
  CHECK(fgm.lattice_dinf <= 0.3125);
  CHECK(fgm.lattice_dinf < 0.1);
  CHECK(approximate(CopulaModel::independence(3), 4).lattice_dinf <= 7.0 / 4);
}

TEST_CASE("property: rationalization is exact and within the bound") {
  gen::Rng rng(314);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = gen::between(rng, 2, 3), m = gen::between(rng, 1, n == 2 ? 10 : 5);
    auto M = random_stochastic(rng, n, m, gen::between(rng, 1, 6));
    check_rationalized(rationalize(M, {n, m}, static_cast<std::int64_t>(ipow(m, n + 2))), M);
  }
}

TEST_CASE("property: approximants are exact permutation copulas certified extreme") {
  gen::Rng rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = gen::between(rng, 2, 3), m = gen::between(rng, 2, n == 2 ? 6 : 3);
    auto M = random_stochastic(rng, n, m, 3);
    auto N = rationalize(M, {n, m}, static_cast<std::int64_t>(ipow(m, n + 2)));
    auto ip = interval_partition(N.measure);
    auto a = assemble(N.measure, ip);
    CHECK(validate_copula_measure(a.measure, m, 0.0).ok);
    CHECK(validate_copula_measure(a.measure, static_cast<std::size_t>(a.order), 0.0).ok);
    CHECK(functional_cover_check(a.measure, 1).covered);

    // Each sub-box sits inside its grid cell.
    std::vector<std::size_t> idx(n);
    for (std::size_t f = 0; f < N.measure.spec().cells(); ++f) {
      if (N.measure.entry(f) == 0) continue;
      unflatten(f, m, idx);
      for (std::size_t k = 0; k < n; ++k) {
        auto I = ip.interval(k, f);
        CHECK(I.lo >= Rational(static_cast<long>(idx[k]), static_cast<long>(m)));
        CHECK(I.hi <= Rational(static_cast<long>(idx[k] + 1), static_cast<long>(m)));
      }
    }
  }
}

TEST_CASE("regression: finer grids do not approximate worse") {
  for (const auto& c : {CopulaModel::independence(2), CopulaModel::fgm(1)}) {
    CHECK(approximate(c, 32).lattice_dinf <= approximate(c, 8).lattice_dinf + 1e-12);
  }
}
