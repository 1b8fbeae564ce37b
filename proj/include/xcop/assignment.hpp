#pragma once

#include "xcop/errors.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace xcop {

enum class Sense { Max, Min };

/// k^n values d(i_1, ..., i_n) in lexicographic order.
struct CostTensor {
  std::size_t n = 2;
  std::size_t k = 1;
  std::vector<double> values;

  double at(std::size_t row, const std::vector<std::vector<std::size_t>>& perms) const;
};

/// A tuple of permutations σ_2..σ_n; row i selects cell (i, σ_2(i), ..., σ_n(i)).
struct AssignmentResult {
  std::vector<std::vector<std::size_t>> perms;
  double total = 0.0;  // summed over rows in order
};

/// Sum of the selected cells, rows in order.
double assignment_total(const CostTensor& cost, const std::vector<std::vector<std::size_t>>& perms);

struct ExactAssignment {
  std::vector<std::size_t> sigma;
  double total = 0.0;
  double dual_bound = 0.0;  // Σu + Σv from the final potentials
};

/// Hungarian method with potentials, O(k^3). Among optimal permutations
/// (edges tight to 1e-9 relative) the lexicographically smallest is returned.
ExactAssignment solve_assignment_2d(const CostTensor& cost, Sense sense);

/// Exhaustive search over all (k!)^{n-1} tuples, keeping the first strict
/// improvement, hence the lexicographically smallest optimum.
/// Budget: k <= 8 for n = 2, k <= 5 for n = 3, nothing larger.
AssignmentResult brute_force_assignment(const CostTensor& cost, Sense sense);

/// Pairwise-swap hill climbing on each σ_k in turn, best over restarts.
/// Restart 0 starts from the identity; the rest from random permutations.
AssignmentResult local_search_nd(const CostTensor& cost, Sense sense, std::size_t restarts, std::uint64_t seed);

}  // namespace xcop
