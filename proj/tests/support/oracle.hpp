#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

namespace oracle {

/// Optimal makespan by breadth-first search over completed job sets.
/// Works from raw arcs (its own closure), n <= 20.
inline int optimal_makespan(std::size_t n,
                            const std::vector<std::pair<std::size_t, std::size_t>> &arcs,
                            std::size_t m) {
  std::vector<std::uint32_t> before(n, 0);
  for (auto [u, v] : arcs)
    before[v] |= 1u << u;
  const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
  std::vector<int> dist(std::size_t{1} << n, -1);
  std::queue<std::uint32_t> q;
  dist[0] = 0;
  q.push(0);
  while (!q.empty()) {
    std::uint32_t done = q.front();
    q.pop();
    if (done == full)
      return dist[done];
    std::uint32_t avail = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (!(done >> v & 1) && (before[v] & ~done) == 0)
        avail |= 1u << v;
    for (std::uint32_t sub = avail; sub != 0; sub = (sub - 1) & avail) {
      if (static_cast<std::size_t>(__builtin_popcount(sub)) > m)
        continue;
      std::uint32_t next = done | sub;
      if (dist[next] < 0) {
        dist[next] = dist[done] + 1;
        q.push(next);
      }
    }
  }
  return -1;
}

/// Random DAG: arc u->v (u < v) with probability p, then a random relabelling.
template <typename Rng>
std::vector<std::pair<std::size_t, std::size_t>> random_dag(std::size_t n,
                                                            double p, Rng &rng) {
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i)
    label[i] = i;
  for (std::size_t i = n; i > 1; --i)
    std::swap(label[i - 1], label[rng() % i]);
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (static_cast<double>(rng() % 1000000) / 1e6 < p)
        arcs.emplace_back(label[u], label[v]);
  return arcs;
}

/// Reachability by repeated boolean matrix squaring: reach[u][v] iff a
/// nonempty path u -> v exists.
inline std::vector<std::vector<bool>>
reachability(std::size_t n,
             const std::vector<std::pair<std::size_t, std::size_t>> &arcs) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (auto [u, v] : arcs)
    r[u][v] = true;
  for (std::size_t len = 1; len < n; len *= 2) {
    auto next = r;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t w = 0; w < n; ++w)
        if (r[u][w])
          for (std::size_t v = 0; v < n; ++v)
            if (r[w][v])
              next[u][v] = true;
    r = std::move(next);
  }
  return r;
}

/// Densest subgraph by recursive choice of vertices in decreasing order.
inline std::size_t densest(std::size_t vertices,
                           const std::vector<std::pair<std::size_t, std::size_t>> &edges,
                           std::size_t kappa) {
  std::vector<std::vector<bool>> adj(vertices, std::vector<bool>(vertices, false));
  for (auto [u, v] : edges)
    adj[u][v] = adj[v][u] = true;
  std::vector<std::size_t> chosen;
  std::size_t best = 0;
  auto rec = [&](auto &self, std::size_t next, std::size_t induced) -> void {
    if (chosen.size() == kappa) {
      best = std::max(best, induced);
      return;
    }
    for (std::size_t v = next; v-- > 0;) {
      std::size_t add = 0;
      for (auto c : chosen)
        add += adj[v][c];
      chosen.push_back(v);
      self(self, v, induced + add);
      chosen.pop_back();
    }
  };
  rec(rec, vertices, 0);
  return best;
}

} // namespace oracle
