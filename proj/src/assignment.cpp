#include "xcop/assignment.hpp"

#include "xcop/grid.hpp"
#include "xcop/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace xcop {

namespace {

void check_tensor(const CostTensor& c) {
  if (c.n < 2 || c.k < 1) throw DomainError("cost tensor needs n >= 2 and k >= 1");
  if (c.values.size() != ipow(c.k, c.n)) throw DomainError("cost tensor has the wrong number of entries");
  for (std::size_t f = 0; f < c.values.size(); ++f)
    if (!std::isfinite(c.values[f])) throw DomainError("cost tensor entry " + std::to_string(f) + " is not finite");
}

std::size_t cell_of(const CostTensor& c, std::size_t row, const std::vector<std::vector<std::size_t>>& perms) {
  std::size_t f = row;
  for (const auto& p : perms) f = f * c.k + p[row];
  return f;
}

bool better(double a, double b, Sense s) { return s == Sense::Max ? a > b : a < b; }

/// Lexicographically smallest perfect matching on the allowed edges,
/// starting from a known perfect matching `match` (row -> column).
std::vector<std::size_t> lex_smallest_matching(const std::vector<std::vector<char>>& allowed,
                                               std::vector<std::size_t> match) {
  const std::size_t k = match.size();
  std::vector<std::size_t> owner(k);
  for (std::size_t i = 0; i < k; ++i) owner[match[i]] = i;
  std::vector<char> locked(k, 0), seen(k);

  // Alternating path from row r to column target through unlocked rows.
  std::function<bool(std::size_t, std::size_t)> reroute = [&](std::size_t r, std::size_t target) -> bool {
    for (std::size_t j = 0; j < k; ++j) {
      if (!allowed[r][j] || seen[j]) continue;
      seen[j] = 1;
      if (j == target) {
        match[r] = j;
        owner[j] = r;
        return true;
      }
      std::size_t next = owner[j];
      if (locked[next]) continue;
      if (reroute(next, target)) {
        match[r] = j;
        owner[j] = r;
        return true;
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (!allowed[i][j] || owner[j] == i) {
        if (owner[j] == i) break;
        continue;
      }
      const std::size_t other = owner[j];
      if (locked[other]) continue;
      // Give j to i; then the row that held j must reach i's old column.
      const std::size_t freed = match[i];
      const auto save_match = match;
      const auto save_owner = owner;
      match[i] = j;
      owner[j] = i;
      locked[i] = 1;
      std::fill(seen.begin(), seen.end(), 0);
      seen[j] = 1;
      if (reroute(other, freed)) break;
      match = save_match;
      owner = save_owner;
      locked[i] = 0;
    }
    locked[i] = 1;
  }
  return match;
}

}  // namespace

double CostTensor::at(std::size_t row, const std::vector<std::vector<std::size_t>>& perms) const {
  return values[cell_of(*this, row, perms)];
}

double assignment_total(const CostTensor& cost, const std::vector<std::vector<std::size_t>>& perms) {
  double total = 0.0;
  for (std::size_t i = 0; i < cost.k; ++i) total += cost.at(i, perms);
  return total;
}

ExactAssignment solve_assignment_2d(const CostTensor& cost, Sense sense) {
  check_tensor(cost);
  if (cost.n != 2) throw DomainError("solve_assignment_2d needs a matrix");
  const std::size_t k = cost.k;
  const double sign = sense == Sense::Max ? -1.0 : 1.0;
  auto a = [&](std::size_t i, std::size_t j) { return sign * cost.values[i * k + j]; };

  // 1-based potentials; p[j] is the row matched to column j.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  std::vector<char> used(k + 1);
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> match(k);
  for (std::size_t j = 1; j <= k; ++j) match[p[j] - 1] = j - 1;

  double scale = 0.0;
  for (double x : cost.values) scale = std::max(scale, std::abs(x));
  const double tol = 1e-9 * (1.0 + scale);
  std::vector<std::vector<char>> tight(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) tight[i][j] = std::abs(a(i, j) - u[i + 1] - v[j + 1]) <= tol;

  ExactAssignment out;
  out.sigma = lex_smallest_matching(tight, match);
  for (std::size_t i = 0; i < k; ++i) out.total += cost.values[i * k + out.sigma[i]];
  double dual = 0.0;
  for (std::size_t i = 1; i <= k; ++i) dual += u[i] + v[i];
  out.dual_bound = sign * dual;
  return out;
}

AssignmentResult brute_force_assignment(const CostTensor& cost, Sense sense) {
  check_tensor(cost);
  const std::size_t limit = cost.n == 2 ? 8 : cost.n == 3 ? 5 : 0;
  if (cost.k > limit) throw DomainError("brute force is limited to k <= 8 (n=2) and k <= 5 (n=3)");
  const std::size_t axes = cost.n - 1;
  std::vector<std::vector<std::size_t>> perms(axes, std::vector<std::size_t>(cost.k));
  for (auto& p : perms) std::iota(p.begin(), p.end(), std::size_t{0});

  AssignmentResult best{perms, assignment_total(cost, perms)};
  while (true) {
    // Odometer over the tuple, last axis fastest, each in lexicographic order.
    std::size_t a = axes;
    bool advanced = false;
    while (a > 0) {
      --a;
      if (std::next_permutation(perms[a].begin(), perms[a].end())) {
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
    const double total = assignment_total(cost, perms);
    if (better(total, best.total, sense)) best = {perms, total};
  }
  return best;
}

AssignmentResult local_search_nd(const CostTensor& cost, Sense sense, std::size_t restarts, std::uint64_t seed) {
  check_tensor(cost);
  const std::size_t k = cost.k;
  const std::size_t axes = cost.n - 1;
  std::mt19937_64 rng(seed);
  double scale = 0.0;
  for (double x : cost.values) scale = std::max(scale, std::abs(x));
  const double min_gain = 1e-12 * (1.0 + scale);

  std::optional<AssignmentResult> best;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    std::vector<std::vector<std::size_t>> perms(axes, std::vector<std::size_t>(k));
    for (auto& p : perms) {
      std::iota(p.begin(), p.end(), std::size_t{0});
      if (r > 0) {
        for (std::size_t i = k; i > 1; --i) std::swap(p[i - 1], p[uniform_index(rng, i)]);
      }
    }
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t a = 0; a < axes; ++a) {
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = i + 1; j < k; ++j) {
            const double before = cost.at(i, perms) + cost.at(j, perms);
            std::swap(perms[a][i], perms[a][j]);
            const double after = cost.at(i, perms) + cost.at(j, perms);
            const double gain = sense == Sense::Max ? after - before : before - after;
            if (gain > min_gain) {
              improved = true;
            } else {
              std::swap(perms[a][i], perms[a][j]);
            }
          }
        }
      }
    }
    const double total = assignment_total(cost, perms);
    if (!best || better(total, best->total, sense)) best = AssignmentResult{perms, total};
  }
  return *best;
}

}  // namespace xcop
