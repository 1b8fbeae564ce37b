#include "xcop/frechet.hpp"

#include "xcop/grid.hpp"

#include <cmath>

namespace xcop {

namespace {

/// q[axis][i][s]: quantile at the s-th midpoint of cell i, increasing in s.
using QuantileTable = std::vector<std::vector<std::vector<double>>>;

QuantileTable quantile_table(const std::vector<MarginalDistribution>& marginals, std::size_t k, std::size_t Q) {
  QuantileTable table(marginals.size(), std::vector<std::vector<double>>(k, std::vector<double>(Q)));
  for (std::size_t a = 0; a < marginals.size(); ++a)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t s = 0; s < Q; ++s) {
        const double p = (static_cast<double>(i) + (static_cast<double>(s) + 0.5) / static_cast<double>(Q)) /
                         static_cast<double>(k);
        table[a][i][s] = marginals[a].quantile(p);
      }
  return table;
}

double diagonal_average(const QuantileTable& table, const Objective& g, std::span<const std::size_t> cell,
                        std::uint32_t code, std::size_t Q, std::vector<double>& x) {
  const std::size_t n = cell.size();
  double sum = 0.0;
  for (std::size_t s = 0; s < Q; ++s) {
    for (std::size_t a = 0; a < n; ++a) {
      const bool reversed = a > 0 && (code >> (a - 1)) & 1u;
      x[a] = table[a][cell[a]][reversed ? Q - 1 - s : s];
    }
    const double v = g(x);
    if (!std::isfinite(v)) {
      std::string where;
      for (std::size_t a = 0; a < n; ++a) where += (a ? "," : "") + std::to_string(cell[a]);
      throw DomainError("objective is not finite in cell (" + where + ") at x = " + std::to_string(x[0]) + ",...");
    }
    sum += v;
  }
  return sum / static_cast<double>(Q);
}

void check_inputs(const std::vector<MarginalDistribution>& marginals, const Objective& g, std::size_t k,
                  std::size_t Q) {
  if (marginals.size() < 2) throw DomainError("need at least two marginals");
  if (k < 1) throw DomainError("order k must be at least 1");
  if (Q < 1) throw DomainError("quadrature size Q must be at least 1");
  if (g.min_arity() > marginals.size()) {
    throw DomainError("objective uses x" + std::to_string(g.min_arity()) + " but only " +
                      std::to_string(marginals.size()) + " marginals were given");
  }
}

}  // namespace

OrientedCostTensor cost_tensor(const std::vector<MarginalDistribution>& marginals, const Objective& g,
                               std::size_t k, std::size_t Q, Sense sense) {
  check_inputs(marginals, g, k, Q);
  const std::size_t n = marginals.size();
  const QuantileTable table = quantile_table(marginals, k, Q);
  OrientedCostTensor out{{n, k, std::vector<double>(ipow(k, n))}, std::vector<std::uint32_t>(ipow(k, n))};
  const std::uint32_t codes = 1u << (n - 1);
  std::vector<std::size_t> lo(n, 0), hi(n, k);
  std::vector<double> x(n);
  std::size_t f = 0;
  for_each_index(lo, hi, [&](std::span<const std::size_t> cell) {
    double best = 0.0;
    std::uint32_t best_code = 0;
    for (std::uint32_t code = 0; code < codes; ++code) {
      const double v = diagonal_average(table, g, cell, code, Q, x);
      if (code == 0 || (sense == Sense::Max ? v > best : v < best)) {
        best = v;
        best_code = code;
      }
    }
    out.cost.values[f] = best;
    out.orientation[f] = best_code;
    ++f;
  });
  return out;
}

PermutationCopulaSpec OptimizationResult::witness() const { return {k, perms, orientations}; }

OptimizationResult optimize_m_of_g(const std::vector<MarginalDistribution>& marginals, const Objective& g,
                                   std::size_t k, Sense sense, const OptimizeOptions& opts) {
  const OrientedCostTensor ct = cost_tensor(marginals, g, k, opts.Q, sense);
  const std::size_t n = marginals.size();
  OptimizationResult r;
  r.k = k;
  r.sense = sense;
  if (n == 2) {
    ExactAssignment ex = solve_assignment_2d(ct.cost, sense);
    r.solver = Solver::Exact;
    r.perms = {ex.sigma};
    r.total = ex.total;
    r.certificate = OptimalityCertificate{ex.total, ex.dual_bound, std::abs(ex.total - ex.dual_bound)};
  } else {
    AssignmentResult ls = local_search_nd(ct.cost, sense, opts.restarts, opts.seed);
    r.solver = Solver::Local;
    r.perms = std::move(ls.perms);
    r.total = ls.total;
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t f = i;
    for (const auto& p : r.perms) f = f * k + p[i];
    r.orientations.push_back(Orientation::from_code(n, ct.orientation[f]));
  }
  r.value = r.total / static_cast<double>(k);
  return r;
}

double evaluate_permutation_objective(const std::vector<MarginalDistribution>& marginals, const Objective& g,
                                      const PermutationCopulaSpec& spec, std::size_t Q) {
  check_inputs(marginals, g, spec.m, Q);
  const std::size_t n = marginals.size();
  if (spec.dim() != n) throw DomainError("permutation copula dimension does not match the marginals");
  if (!spec.orientations.empty() && spec.orientations.size() != spec.m) {
    throw DomainError("one orientation per row is required");
  }
  const QuantileTable table = quantile_table(marginals, spec.m, Q);
  std::vector<std::size_t> cell(n);
  std::vector<double> x(n);
  double total = 0.0;
  for (std::size_t i = 0; i < spec.m; ++i) {
    cell[0] = i;
    for (std::size_t a = 1; a < n; ++a) cell[a] = spec.perms[a - 1].at(i);
    const std::uint32_t code = spec.orientations.empty() ? 0 : spec.orientations[i].code();
    total += diagonal_average(table, g, cell, code, Q, x);
  }
  return total / static_cast<double>(spec.m);
}

std::vector<ScheduleStep> default_schedule(std::size_t J, std::size_t kmax) {
  if (J < 1 || kmax < 1) throw DomainError("schedule needs J >= 1 and kmax >= 1");
  std::vector<ScheduleStep> out;
  for (std::size_t j = 1; j <= J; ++j) {
    const double eps = std::ldexp(1.0, -static_cast<int>(j));
    const auto k = static_cast<std::size_t>(std::ceil(8.0 / eps));
    out.push_back({eps, std::min(kmax, k)});
  }
  return out;
}

MatchProbability match_probability(const MarginalDistribution& fx, const MarginalDistribution& fy,
                                   const std::vector<ScheduleStep>& schedule, std::size_t Q) {
  if (schedule.empty()) throw DomainError("schedule must not be empty");
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    if (!(schedule[j].eps > 0)) throw DomainError("schedule eps must be positive");
    if (j > 0 && schedule[j].eps < schedule[j - 1].eps && schedule[j].k < schedule[j - 1].k) {
      throw DomainError("k must not decrease as eps decreases");
    }
  }
  MatchProbability out;
  const std::vector<MarginalDistribution> marginals{fx, fy};
  for (const auto& step : schedule) {
    OptimizeOptions opts;
    opts.Q = Q;
    auto r = optimize_m_of_g(marginals, Objective::match_eps(step.eps), step.k, Sense::Max, opts);
    out.trace.push_back({step.eps, step.k, r.value});
  }
  out.estimate = out.trace.back().value;
  return out;
}

}  // namespace xcop
