#pragma once

// Hand-rolled random generators for property tests.

#include "xcop/constructions.hpp"
#include "xcop/grid.hpp"
#include "xcop/random.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(xcop::uniform_index(rng, hi - lo + 1));
}

inline std::vector<std::size_t> permutation(Rng& rng, std::size_t m) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = m; i > 1; --i) std::swap(p[i - 1], p[xcop::uniform_index(rng, i)]);
  return p;
}

inline xcop::Orientation orientation(Rng& rng, std::size_t n) {
  return xcop::Orientation::from_code(n, static_cast<std::uint32_t>(xcop::uniform_index(rng, 1u << (n - 1))));
}

inline xcop::PermutationCopulaSpec permutation_spec(Rng& rng, std::size_t n, std::size_t m, bool orient = true) {
  xcop::PermutationCopulaSpec s;
  s.m = m;
  for (std::size_t a = 1; a < n; ++a) s.perms.push_back(permutation(rng, m));
  if (orient)
    for (std::size_t i = 0; i < m; ++i) s.orientations.push_back(orientation(rng, n));
  return s;
}

/// Rational in (0,1) with denominator up to `den`.
inline xcop::Rational unit_rational(Rng& rng, long den) {
  const long d = static_cast<long>(between(rng, 2, static_cast<std::size_t>(den)));
  const long p = static_cast<long>(between(rng, 1, static_cast<std::size_t>(d - 1)));
  return xcop::Rational(p, d);
}

/// Sorted break points 0 = t_0 < ... < t_b = 1 with random rational gaps.
inline std::vector<xcop::Rational> breaks(Rng& rng, std::size_t blocks) {
  std::vector<xcop::Rational> w(blocks);
  xcop::Rational total = 0;
  for (auto& x : w) {
    x = xcop::Rational(static_cast<long>(between(rng, 1, 9)));
    total += x;
  }
  std::vector<xcop::Rational> out{0};
  xcop::Rational acc = 0;
  for (const auto& x : w) {
    acc += x / total;
    out.push_back(acc);
  }
  return out;
}

/// Weighted sum of `terms` random permutation tensors. Each term adds its
/// weight to every slab of every axis, so the slabs stay balanced.
inline xcop::GridMeasure grid_measure(Rng& rng, std::size_t n, std::size_t m, std::size_t terms) {
  const xcop::GridSpec spec{n, m};
  std::vector<std::int64_t> t(spec.cells(), 0);
  std::vector<std::size_t> idx(n);
  for (std::size_t r = 0; r < terms; ++r) {
    const std::int64_t w = static_cast<std::int64_t>(between(rng, 1, 4));
    std::vector<std::vector<std::size_t>> perms;
    for (std::size_t a = 1; a < n; ++a) perms.push_back(permutation(rng, m));
    for (std::size_t i = 0; i < m; ++i) {
      idx[0] = i;
      for (std::size_t a = 1; a < n; ++a) idx[a] = perms[a - 1][i];
      t[xcop::flat_index(idx, m)] += w;
    }
  }
  std::int64_t per_slab = 0;
  for (std::size_t f = 0; f < t.size(); ++f) {
    xcop::unflatten(f, m, idx);
    if (idx[0] == 0) per_slab += t[f];
  }
  return xcop::GridMeasure(spec, per_slab * static_cast<std::int64_t>(m), std::move(t));
}

}  // namespace gen
