#include "xcop/approximation.hpp"

#include "xcop/measure_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace xcop {

namespace {

/// Successive shortest paths on a dense residual graph. Small instances only.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t nodes) : adj_(nodes) {}

  std::size_t add_edge(std::size_t from, std::size_t to, long long cap, double cost) {
    adj_[from].push_back(edges_.size());
    edges_.push_back({to, cap, cost});
    adj_[to].push_back(edges_.size());
    edges_.push_back({from, 0, -cost});
    return edges_.size() - 2;
  }

  long long flow_on(std::size_t edge) const { return edges_[edge ^ 1].cap; }

  /// Pushes up to `limit` units from s to t at minimum cost; returns the flow sent.
  long long run(std::size_t s, std::size_t t, long long limit) {
    const std::size_t V = adj_.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> pot(V, inf);
    // Bellman-Ford once: initial costs may be negative.
    pot[s] = 0;
    for (std::size_t it = 0; it + 1 < V; ++it) {
      bool changed = false;
      for (std::size_t u = 0; u < V; ++u) {
        if (pot[u] == inf) continue;
        for (auto e : adj_[u]) {
          if (edges_[e].cap > 0 && pot[u] + edges_[e].cost < pot[edges_[e].to] - 1e-15) {
            pot[edges_[e].to] = pot[u] + edges_[e].cost;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    for (auto& p : pot)
      if (p == inf) p = 0;

    long long sent = 0;
    std::vector<double> dist(V);
    std::vector<std::size_t> via(V);
    std::vector<char> done(V);
    while (sent < limit) {
      std::fill(dist.begin(), dist.end(), inf);
      std::fill(done.begin(), done.end(), 0);
      dist[s] = 0;
      for (std::size_t round = 0; round < V; ++round) {
        std::size_t u = V;
        for (std::size_t v = 0; v < V; ++v)
          if (!done[v] && dist[v] < inf && (u == V || dist[v] < dist[u])) u = v;
        if (u == V) break;
        done[u] = 1;
        for (auto e : adj_[u]) {
          const Edge& ed = edges_[e];
          if (ed.cap <= 0) continue;
          double nd = dist[u] + ed.cost + pot[u] - pot[ed.to];
          if (nd < dist[ed.to] - 1e-15) {
            dist[ed.to] = nd;
            via[ed.to] = e;
          }
        }
      }
      if (dist[t] == inf) break;
      for (std::size_t v = 0; v < V; ++v)
        if (dist[v] < inf) pot[v] += dist[v];
      long long push = limit - sent;
      for (std::size_t v = t; v != s; v = edges_[via[v] ^ 1].to) push = std::min(push, edges_[via[v]].cap);
      for (std::size_t v = t; v != s; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].cap -= push;
        edges_[via[v] ^ 1].cap += push;
      }
      sent += push;
    }
    return sent;
  }

 private:
  struct Edge {
    std::size_t to;
    long long cap;
    double cost;
  };
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Edge> edges_;
};

struct Deficits {
  std::vector<std::vector<long long>> per_axis;  // [axis][slab]
  long long total = 0;
};

Deficits deficits(const GridSpec& spec, const std::vector<std::int64_t>& t, std::int64_t target) {
  Deficits d;
  d.per_axis.assign(spec.n, std::vector<long long>(spec.m, target));
  std::vector<std::size_t> idx(spec.n);
  for (std::size_t f = 0; f < t.size(); ++f) {
    unflatten(f, spec.m, idx);
    for (std::size_t k = 0; k < spec.n; ++k) d.per_axis[k][idx[k]] -= t[f];
  }
  d.total = std::accumulate(d.per_axis[0].begin(), d.per_axis[0].end(), 0LL);
  return d;
}

/// Two-dimensional repair: fill row/column deficits on the cells with the
/// largest fractional parts, one unit per cell at most.
bool repair_transport(const GridSpec& spec, std::vector<std::int64_t>& t, const std::vector<double>& frac,
                      Deficits& def) {
  const std::size_t m = spec.m;
  const std::size_t s = 2 * m, sink = 2 * m + 1;
  MinCostFlow mcf(2 * m + 2);
  for (std::size_t j = 0; j < m; ++j) {
    if (def.per_axis[0][j] > 0) mcf.add_edge(s, j, def.per_axis[0][j], 0.0);
    if (def.per_axis[1][j] > 0) mcf.add_edge(m + j, sink, def.per_axis[1][j], 0.0);
  }
  std::vector<std::size_t> cell_edge(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) cell_edge[i * m + j] = mcf.add_edge(i, m + j, 1, -frac[i * m + j]);
  if (mcf.run(s, sink, def.total) != def.total) return false;
  for (std::size_t f = 0; f < m * m; ++f) t[f] += mcf.flow_on(cell_edge[f]);
  def.total = 0;
  return true;
}

/// n >= 3: repeatedly raise the cell with the largest residual among those
/// whose every slab still has a deficit; one exists while any deficit remains.
void repair_greedy(const GridSpec& spec, std::vector<std::int64_t>& t, const std::vector<Rational>& x,
                   Deficits& def) {
  std::vector<std::size_t> order(t.size());
  std::vector<double> residual(t.size());
  std::vector<std::size_t> idx(spec.n);
  while (def.total > 0) {
    for (std::size_t f = 0; f < t.size(); ++f) residual[f] = to_double(x[f] - t[f]);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return residual[a] > residual[b]; });
    for (std::size_t f : order) {
      if (def.total == 0) break;
      unflatten(f, spec.m, idx);
      bool open = true;
      for (std::size_t k = 0; k < spec.n && open; ++k) open = def.per_axis[k][idx[k]] > 0;
      if (!open) continue;
      ++t[f];
      for (std::size_t k = 0; k < spec.n; ++k) --def.per_axis[k][idx[k]];
      --def.total;
    }
  }
}

}  // namespace

RationalizeResult rationalize(const std::vector<double>& M, GridSpec spec, std::int64_t D, int max_retries) {
  if (spec.n < 2 || spec.m < 1) throw DomainError("invalid grid spec");
  if (M.size() != spec.cells()) throw DomainError("tensor size does not match the grid");
  if (D <= 0 || D % static_cast<std::int64_t>(spec.m) != 0) throw DomainError("D must be a positive multiple of m");

  std::vector<double> clean(M.size());
  for (std::size_t f = 0; f < M.size(); ++f) {
    if (!std::isfinite(M[f]) || M[f] < -1e-12) throw DomainError("tensor entries must be non-negative");
    clean[f] = std::max(M[f], 0.0);
  }
  const double slab = 1.0 / static_cast<double>(spec.m);
  std::vector<std::size_t> idx(spec.n);
  std::vector<std::vector<double>> sums(spec.n, std::vector<double>(spec.m, 0.0));
  for (std::size_t f = 0; f < clean.size(); ++f) {
    unflatten(f, spec.m, idx);
    for (std::size_t k = 0; k < spec.n; ++k) sums[k][idx[k]] += clean[f];
  }
  for (const auto& axis : sums)
    for (double s : axis)
      if (std::abs(s - slab) > 1e-9) throw DomainError("tensor is not stochastic in every coordinate");

  const Rational eps = Rational(1) / Rational(Integer(ipow(spec.m, spec.n + 1)));
  std::vector<Rational> exact(clean.size());
  for (std::size_t f = 0; f < clean.size(); ++f) exact[f] = from_double(clean[f]);

  Rational best_rho = -1;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const Rational d(D);
    std::vector<Rational> x(exact.size());
    std::vector<std::int64_t> t(exact.size());
    std::vector<double> frac(exact.size());
    for (std::size_t f = 0; f < exact.size(); ++f) {
      x[f] = exact[f] * d;
      t[f] = floor_int(x[f]).convert_to<std::int64_t>();
      frac[f] = to_double(x[f] - t[f]);
    }
    Deficits def = deficits(spec, t, D / static_cast<std::int64_t>(spec.m));
    for (const auto& axis : def.per_axis)
      for (long long v : axis)
        if (v < 0) throw RationalizeError("slab exceeds its target after rounding down", to_double(best_rho));

    if (spec.n == 2 && !repair_transport(spec, t, frac, def)) def = deficits(spec, t, D / static_cast<std::int64_t>(spec.m));
    repair_greedy(spec, t, x, def);

    Rational rho = 0;
    for (std::size_t f = 0; f < t.size(); ++f) rho = std::max(rho, abs(Rational(t[f], D) - exact[f]));
    if (best_rho < 0 || rho < best_rho) best_rho = rho;
    if (rho < eps) return {GridMeasure(spec, D, std::move(t)), rho};
    if (D > std::numeric_limits<std::int64_t>::max() / 2) break;
    D *= 2;
  }
  throw RationalizeError("rationalization did not reach max deviation below m^-(n+1); achieved " +
                             std::to_string(to_double(best_rho)),
                         to_double(best_rho));
}

IntervalPartition::IntervalPartition(GridSpec spec, std::int64_t denominator,
                                     std::vector<std::vector<std::int64_t>> starts,
                                     std::vector<std::int64_t> lengths)
    : spec_(spec), denominator_(denominator), starts_(std::move(starts)), lengths_(std::move(lengths)) {
  if (starts_.size() != spec_.n || lengths_.size() != spec_.cells()) throw DomainError("partition shape mismatch");
}

Interval IntervalPartition::interval(std::size_t axis, std::size_t cell) const {
  return {Rational(starts_[axis][cell], denominator_),
          Rational(starts_[axis][cell] + lengths_[cell], denominator_)};
}

IntervalPartition interval_partition(const GridMeasure& N) {
  const GridSpec& spec = N.spec();
  const std::int64_t slab = N.denominator() / static_cast<std::int64_t>(spec.m);
  std::vector<std::vector<std::int64_t>> offset(spec.n, std::vector<std::int64_t>(spec.m));
  for (auto& axis : offset)
    for (std::size_t j = 0; j < spec.m; ++j) axis[j] = static_cast<std::int64_t>(j) * slab;
  std::vector<std::vector<std::int64_t>> starts(spec.n, std::vector<std::int64_t>(spec.cells()));
  std::vector<std::size_t> idx(spec.n);
  for (std::size_t f = 0; f < spec.cells(); ++f) {
    unflatten(f, spec.m, idx);
    for (std::size_t k = 0; k < spec.n; ++k) {
      starts[k][f] = offset[k][idx[k]];
      offset[k][idx[k]] += N.entry(f);
    }
  }
  return IntervalPartition(spec, N.denominator(), std::move(starts), N.entries());
}

Assembly assemble(const GridMeasure& N, const IntervalPartition& ip) {
  const GridSpec& spec = N.spec();
  if (!(ip.spec() == spec) || ip.denominator() != N.denominator()) throw DomainError("partition does not match measure");
  std::vector<Segment> segs;
  for (std::size_t f = 0; f < spec.cells(); ++f) {
    if (N.entry(f) == 0) continue;
    Segment s{RPoint(spec.n), RPoint(spec.n), N.mass(f)};
    for (std::size_t k = 0; k < spec.n; ++k) {
      Interval I = ip.interval(k, f);
      s.a[k] = I.lo;
      s.b[k] = I.hi;
    }
    segs.push_back(std::move(s));
  }
  return {SegmentMeasure(spec.n, std::move(segs)), N.denominator()};
}

ApproximationReport approximate(const CopulaModel& c, std::size_t m, std::optional<std::int64_t> D) {
  if (m < 1) throw DomainError("m must be at least 1");
  const GridSpec spec{c.dim(), m};
  std::int64_t denom;
  if (D) {
    denom = *D;
  } else {
    double est = std::pow(static_cast<double>(m), static_cast<double>(spec.n + 2));
    if (est > 4e18) throw DomainError("default denominator m^(n+2) overflows; pass D explicitly");
    denom = static_cast<std::int64_t>(ipow(m, spec.n + 2));
  }
  RationalizeResult N = rationalize(grid_extract(c, m), spec, denom);
  Assembly a = assemble(N.measure, interval_partition(N.measure));
  ApproximationReport out{a.measure, a.order, N.measure.denominator(), to_double(N.rho), 0.0,
                          static_cast<double>(2 * spec.n + 1) / static_cast<double>(m)};
  out.lattice_dinf = dinf_distance(c, CopulaModel(a.measure), 4 * m).estimate;
  return out;
}

}  // namespace xcop
