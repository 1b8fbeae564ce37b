#include "generators.hpp"

#include "xcop/frechet.hpp"
#include "xcop/measure_ops.hpp"

#include <doctest.h>

#include <cmath>

using namespace xcop;

namespace {

std::vector<MarginalDistribution> uniforms(std::size_t n) {
  return std::vector<MarginalDistribution>(n, MarginalDistribution::uniform(0, 1));
}

CostTensor random_tensor(gen::Rng& rng, std::size_t n, std::size_t k) {
  CostTensor c{n, k, std::vector<double>(ipow(k, n))};
  for (auto& v : c.values) v = uniform01(rng);
  return c;
}

std::size_t cell(std::size_t i, std::size_t j, std::size_t k) { return i * k + j; }

}  // namespace

TEST_CASE("quantiles") {
  CHECK(MarginalDistribution::uniform(0, 1).quantile(0.25) == 0.25);
  CHECK(MarginalDistribution::uniform(2, 4).quantile(0.25) == 2.5);
  CHECK(MarginalDistribution::exponential(1).quantile(0.5) == doctest::Approx(-std::log(0.5)).epsilon(1e-15));
  CHECK(MarginalDistribution::tabulated({0, 1}, {0, 2}).quantile(0.5) == 1.0);
  CHECK(MarginalDistribution::tabulated({0, 0.5, 1}, {0, 1, 5}).quantile(0.75) == 3.0);

  // Invert against the normal CDF written with erfc.
  for (double p : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.5, 0.7, 0.975, 0.999999}) {
    const double x = standard_normal_quantile(p);
    const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
    CHECK(std::abs(back - p) <= 1e-12 * std::max(1.0, p / (1 - p)));
  }
  CHECK(standard_normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(std::abs(MarginalDistribution::normal(1, 2).quantile(0.975) - (1 + 2 * 1.959963984540054)) < 1e-9);

  CHECK_THROWS_AS(MarginalDistribution::uniform(0, 1).quantile(0), DomainError);
  CHECK_THROWS_AS(MarginalDistribution::uniform(0, 1).quantile(1), DomainError);
  CHECK_THROWS_AS(MarginalDistribution::tabulated({0, 0, 1}, {0, 1, 2}), DomainError);
  CHECK_THROWS_AS(MarginalDistribution::tabulated({0.1, 1}, {0, 1}), DomainError);
  CHECK_THROWS_AS(MarginalDistribution::exponential(0), DomainError);
}

TEST_CASE("marginal specs") {
  CHECK(MarginalDistribution::parse("uniform:0.5,1.5").quantile(0.5) == 1.0);
  CHECK(MarginalDistribution::parse("exp:2").quantile(0.5) == doctest::Approx(std::log(2.0) / 2));
  CHECK(MarginalDistribution::parse("normal:0,1").quantile(0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(MarginalDistribution::parse("uniform:1"), DomainError);
  CHECK_THROWS_AS(MarginalDistribution::parse("beta:1,2"), DomainError);
  CHECK_THROWS_AS(MarginalDistribution::parse("uniform"), DomainError);
}

TEST_CASE("objective expressions") {
  std::vector<double> half{0.5, 0.5}, p{0.2, 0.7}, three{3.0, 2.0};
  CHECK(Objective::parse("x1*x2")(half) == 0.25);
  CHECK(Objective::parse("min(x1,x2)+1")(p) == doctest::Approx(1.2));
  CHECK(Objective::parse("-x1^2")(three) == -9.0);
  CHECK(Objective::parse("2^3^2")(three) == 64.0);
  CHECK(Objective::parse("2*3+4*x2")(three) == 14.0);
  CHECK(Objective::parse("x1 - x2 - 1")(three) == 0.0);
  CHECK(Objective::parse("x1/x2/2")(three) == 0.75);
  CHECK(Objective::parse("abs(x2 - x1) + max(x1, 4) + exp(0) + ln(1)")(three) == 6.0);
  CHECK(Objective::parse("x1^-1")(three) == doctest::Approx(1.0 / 3));
  CHECK(Objective::parse("1.5e1")(three) == 15.0);

  try {
    Objective::parse("x1*");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.column() == 4);
  }
  try {
    Objective::parse("x1 + foo(x2)");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.column() == 6);
    CHECK(std::string(e.what()).find("unknown identifier") != std::string::npos);
  }
  CHECK_THROWS_AS(Objective::parse("min(x1)"), ParseError);
  CHECK_THROWS_AS(Objective::parse("abs(x1, x2)"), ParseError);
  CHECK_THROWS_AS(Objective::parse("(x1"), ParseError);
  CHECK_THROWS_AS(Objective::parse("x0"), ParseError);
  CHECK_THROWS_AS(Objective::parse("x1 x2"), ParseError);
  CHECK(Objective::parse("x3").min_arity() == 3);

  CHECK(Objective::product()(three) == 6.0);
  CHECK(Objective::abs_diff()(three) == 1.0);
  std::vector<double> close{0.5, 0.55};
  CHECK(Objective::match_eps(0.1)(close) == doctest::Approx(0.5));
  CHECK(Objective::match_eps(0.1)(three) == 0.0);
  CHECK(Objective::from_cli("match_eps:0.25")(half) == 1.0);
  CHECK_THROWS_AS(Objective::from_cli("nope"), DomainError);
}

TEST_CASE("cost tensor") {
  auto g = Objective::product();
  auto mx = cost_tensor(uniforms(2), g, 2, 32, Sense::Max);
  // (1/0.5) * integral of t^2 over [0, 1/2], and its analogue on [1/2, 1].
  CHECK(mx.cost.values[cell(0, 0, 2)] == doctest::Approx(1.0 / 12).epsilon(1e-3));
  CHECK(std::abs(mx.cost.values[cell(0, 0, 2)] - 1.0 / 12) < 1e-4);
  CHECK(std::abs(mx.cost.values[cell(1, 1, 2)] - 7.0 / 12) < 1e-4);
  CHECK(std::abs(mx.cost.values[cell(0, 1, 2)] - 5.0 / 24) < 1e-4);
  CHECK(mx.orientation[cell(0, 1, 2)] == 0);

  auto mn = cost_tensor(uniforms(2), g, 2, 32, Sense::Min);
  CHECK(std::abs(mn.cost.values[cell(0, 1, 2)] - 1.0 / 6) < 1e-4);
  CHECK(mn.orientation[cell(0, 1, 2)] == 1);

  std::vector<MarginalDistribution> wide{MarginalDistribution::uniform(-1, 1), MarginalDistribution::uniform(0, 1)};
  CHECK_THROWS_WITH_AS(cost_tensor(wide, Objective::parse("ln(x1)"), 2, 4, Sense::Max),
                       doctest::Contains("cell (0,0)"), DomainError);
  CHECK_THROWS_AS(cost_tensor(uniforms(2), Objective::parse("x3"), 2, 4, Sense::Max), DomainError);
}

TEST_CASE("quadrature converges at second order") {
  auto g = Objective::product();
  const double exact = 1.0 / 12;  // cell (0,0) of k = 2, + orientation
  double prev = std::abs(cost_tensor(uniforms(2), g, 2, 4, Sense::Max).cost.values[0] - exact);
  for (std::size_t Q : {8, 16, 32, 64}) {
    double err = std::abs(cost_tensor(uniforms(2), g, 2, Q, Sense::Max).cost.values[0] - exact);
    CHECK(prev / err >= 3.0);
    prev = err;
  }
}

TEST_CASE("assignment solvers") {
  CostTensor eye{2, 2, {1, 0, 0, 1}};
  auto a = solve_assignment_2d(eye, Sense::Max);
  CHECK(a.sigma == std::vector<std::size_t>{0, 1});
  CHECK(a.total == 2);
  CHECK(brute_force_assignment(eye, Sense::Max).total == 2);

  CostTensor tie{2, 2, {1, 2, 3, 4}};
  auto t = solve_assignment_2d(tie, Sense::Max);
  CHECK(t.total == 5);
  CHECK(t.sigma == std::vector<std::size_t>{0, 1});

  CostTensor one{2, 1, {7.5}};
  CHECK(brute_force_assignment(one, Sense::Max).total == 7.5);
  CHECK(solve_assignment_2d(one, Sense::Min).total == 7.5);

  gen::Rng rng(7);
  auto r4 = random_tensor(rng, 2, 4);
  CHECK(brute_force_assignment(r4, Sense::Max).total == solve_assignment_2d(r4, Sense::Max).total);

  CHECK_THROWS_AS(brute_force_assignment(random_tensor(rng, 2, 9), Sense::Max), DomainError);
  CHECK_THROWS_AS(brute_force_assignment(random_tensor(rng, 3, 6), Sense::Max), DomainError);
  CostTensor bad{2, 2, {1, NAN, 0, 1}};
  CHECK_THROWS_AS(solve_assignment_2d(bad, Sense::Max), DomainError);
}

TEST_CASE("property: Hungarian equals brute force") {
  gen::Rng rng(1);
  for (int seed = 0; seed < 100; ++seed) {
    const std::size_t k = gen::between(rng, 1, 8);
    auto c = random_tensor(rng, 2, k);
    // Quantize half the instances to force ties.
    if (seed % 2)
      for (auto& v : c.values) v = std::floor(v * 4);
    for (Sense s : {Sense::Max, Sense::Min}) {
      auto h = solve_assignment_2d(c, s);
      auto b = brute_force_assignment(c, s);
      CHECK(h.total == b.total);
      CHECK(h.sigma == b.perms[0]);
      CHECK(std::abs(h.dual_bound - h.total) <= 1e-9 * (1 + std::abs(h.total)));
      auto sorted = h.sigma;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < k; ++i) CHECK(sorted[i] == i);
    }
  }
}

TEST_CASE("local search") {
  CostTensor zero{3, 4, std::vector<double>(64, 0.0)};
  CHECK(local_search_nd(zero, Sense::Max, 5, 1).total == 0.0);

  // Separable tensors make every permutation tuple optimal.
  gen::Rng rng(3);
  std::vector<double> a(5), b(5), c(5);
  for (std::size_t i = 0; i < 5; ++i) a[i] = uniform01(rng), b[i] = uniform01(rng), c[i] = uniform01(rng);
  CostTensor sep{3, 5, std::vector<double>(125)};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t l = 0; l < 5; ++l) sep.values[(i * 5 + j) * 5 + l] = a[i] + b[j] + c[l];
  double expect = 0;
  for (std::size_t i = 0; i < 5; ++i) expect += a[i] + b[i] + c[i];
  CHECK(local_search_nd(sep, Sense::Max, 3, 2).total == doctest::Approx(expect));

  auto r = random_tensor(rng, 3, 4);
  CHECK(local_search_nd(r, Sense::Max, 10, 42).total == local_search_nd(r, Sense::Max, 10, 42).total);
  CHECK(local_search_nd(r, Sense::Max, 10, 42).total >= local_search_nd(r, Sense::Max, 1, 42).total);

  int good = 0;
  for (int seed = 0; seed < 20; ++seed) {
    gen::Rng g(static_cast<std::uint64_t>(seed));
    auto t = random_tensor(g, 3, 4);
    good += local_search_nd(t, Sense::Max, 50, 3).total >= 0.95 * brute_force_assignment(t, Sense::Max).total;
  }
  CHECK(good == 20);
}

TEST_CASE("optimize the product objective") {
  auto g = Objective::product();
  auto mx = optimize_m_of_g(uniforms(2), g, 2, Sense::Max);
  CHECK(std::abs(mx.value - 1.0 / 3) < 1e-4);
  CHECK(mx.perms[0] == std::vector<std::size_t>{0, 1});
  CHECK(mx.solver == Solver::Exact);
  REQUIRE(mx.certificate);
  CHECK(mx.certificate->gap < 1e-9);

  auto mn = optimize_m_of_g(uniforms(2), g, 2, Sense::Min);
  CHECK(std::abs(mn.value - 1.0 / 6) < 1e-4);
  CHECK(mn.perms[0] == std::vector<std::size_t>{1, 0});
  for (const auto& o : mn.orientations) CHECK(o.str() == "+-");

  // E[U^2] and E[U(1-U)] by direct integration.
  const double upper = 1.0 / 3, lower = 1.0 / 6;
  CHECK(std::abs(optimize_m_of_g(uniforms(2), g, 64, Sense::Max).value - upper) <= 0.02);
  for (std::size_t k : {32, 48}) {
    CHECK(optimize_m_of_g(uniforms(2), g, k, Sense::Max).value >= upper - 0.02);
    CHECK(optimize_m_of_g(uniforms(2), g, k, Sense::Min).value <= lower + 0.02);
  }

  auto three = optimize_m_of_g(uniforms(3), g, 6, Sense::Max);
  CHECK(three.solver == Solver::Local);
  CHECK(three.value == doctest::Approx(evaluate_permutation_objective(uniforms(3), g, three.witness())));
}

TEST_CASE("property: the optimum dominates random permutations") {
  gen::Rng rng(12);
  std::vector<MarginalDistribution> ms{MarginalDistribution::exponential(1), MarginalDistribution::normal(0, 1)};
  auto g = Objective::parse("min(x1, x2) + abs(x1 - x2)^0.5");
  const std::size_t k = 10;
  auto best = optimize_m_of_g(ms, g, k, Sense::Max);
  CHECK(std::abs(best.value - evaluate_permutation_objective(ms, g, best.witness())) <= 1e-10);
  for (int i = 0; i < 20; ++i) {
    auto spec = gen::permutation_spec(rng, 2, k);
    CHECK(best.value >= evaluate_permutation_objective(ms, g, spec) - 1e-12);
  }
}

TEST_CASE("property: reported value agrees with Monte Carlo") {
  std::vector<MarginalDistribution> ms{MarginalDistribution::uniform(0, 1), MarginalDistribution::exponential(2)};
  auto g = Objective::parse("x1*x2 + min(x1, x2)");
  auto r = optimize_m_of_g(ms, g, 12, Sense::Min);
  auto pts = sample(permutation_copula(r.witness()), 1000000, 5);
  double sum = 0, sq = 0;
  std::vector<double> x(2);
  for (const auto& p : pts) {
    // Sampled points may sit exactly on 0 or 1; nudge inside for the quantiles.
    for (std::size_t a = 0; a < 2; ++a) x[a] = ms[a].quantile(std::clamp(p[a], 1e-15, 1 - 1e-15));
    const double v = g(x);
    sum += v;
    sq += v * v;
  }
  const double N = 1e6, mean = sum / N, se = std::sqrt((sq / N - mean * mean) / N);
  CHECK(std::abs(mean - r.value) <= 3 * se);
}

TEST_CASE("match probability") {
  auto same = match_probability(MarginalDistribution::uniform(0, 1), MarginalDistribution::uniform(0, 1), {{0.25, 16}});
  CHECK(same.estimate == 1.0);

  auto apart = match_probability(MarginalDistribution::uniform(0, 1), MarginalDistribution::uniform(2, 3), {{0.25, 16}});
  CHECK(apart.estimate == 0.0);

  auto sched = default_schedule(3, 64);
  REQUIRE(sched.size() == 3);
  CHECK(sched[0].eps == 0.5);
  CHECK(sched[0].k == 16);
  CHECK(sched[2].eps == 0.125);
  CHECK(sched[2].k == 64);
  CHECK(default_schedule(4, 40).back().k == 40);

  // Maximal-coupling value: midpoint integration of min(f_X, f_Y).
  auto fx = [](double t) { return t >= 0 && t <= 1 ? 1.0 : 0.0; };
  auto fy = [](double t) { return t >= 0.5 && t <= 1.5 ? 1.0 : 0.0; };
  double overlap = 0;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double t = -1 + 3.0 * (i + 0.5) / steps;
    overlap += std::min(fx(t), fy(t)) * 3.0 / steps;
  }
  auto shifted = match_probability(MarginalDistribution::uniform(0, 1), MarginalDistribution::uniform(0.5, 1.5), sched);
  CHECK(std::abs(shifted.estimate - overlap) <= 0.08);
  CHECK(shifted.trace.size() == 3);

  CHECK_THROWS_AS(match_probability(MarginalDistribution::uniform(0, 1), MarginalDistribution::uniform(0, 1), {}),
                  DomainError);
}
