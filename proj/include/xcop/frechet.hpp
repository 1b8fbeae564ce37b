#pragma once

#include "xcop/assignment.hpp"
#include "xcop/constructions.hpp"
#include "xcop/marginals.hpp"
#include "xcop/objective.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace xcop {

/// Per-cell diagonal averages of g together with the orientation that attains them.
struct OrientedCostTensor {
  CostTensor cost;
  std::vector<std::uint32_t> orientation;  // Orientation::code per cell
};

/// d(cell) = midpoint-rule average over Q points of g(F^{-1}(x(t))) along an
/// interior diagonal of the cell. All 2^{n-1} diagonals are tried and the best
/// for `sense` kept, smallest code on ties. Throws if g is not finite.
OrientedCostTensor cost_tensor(const std::vector<MarginalDistribution>& marginals, const Objective& g,
                               std::size_t k, std::size_t Q, Sense sense);

enum class Solver { Exact, Local };

struct OptimalityCertificate {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct OptimizationResult {
  double value = 0.0;  // total / k
  double total = 0.0;
  std::size_t k = 1;
  Sense sense = Sense::Max;
  Solver solver = Solver::Exact;
  std::vector<std::vector<std::size_t>> perms;  // σ_2..σ_n
  std::vector<Orientation> orientations;        // per row
  std::optional<OptimalityCertificate> certificate;

  PermutationCopulaSpec witness() const;
};

struct OptimizeOptions {
  std::size_t Q = 32;
  std::size_t restarts = 20;  // local search only
  std::uint64_t seed = 0;
};

/// Best permutation copula of order k for E g(F_1^{-1}(U_1), ...). Exact
/// assignment for n = 2, local search otherwise.
OptimizationResult optimize_m_of_g(const std::vector<MarginalDistribution>& marginals, const Objective& g,
                                   std::size_t k, Sense sense, const OptimizeOptions& opts = {});

/// Midpoint-rule value of the objective under an explicit permutation copula.
double evaluate_permutation_objective(const std::vector<MarginalDistribution>& marginals, const Objective& g,
                                      const PermutationCopulaSpec& spec, std::size_t Q = 32);

struct ScheduleStep {
  double eps = 0.0;
  std::size_t k = 1;
};

struct MatchStep {
  double eps = 0.0;
  std::size_t k = 1;
  double value = 0.0;
};

struct MatchProbability {
  double estimate = 0.0;  // value at the last step
  std::vector<MatchStep> trace;
};

/// eps_j = 2^-j for j = 1..J with k_j = min(kmax, ceil(8/eps_j)).
std::vector<ScheduleStep> default_schedule(std::size_t J, std::size_t kmax);

/// Runs optimize_m_of_g with match_eps(eps) at each step.
MatchProbability match_probability(const MarginalDistribution& fx, const MarginalDistribution& fy,
                                   const std::vector<ScheduleStep>& schedule, std::size_t Q = 32);

}  // namespace xcop
