#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "usched/error.hpp"
#include "usched/instance.hpp"
#include "usched/prec_graph.hpp"

namespace usched {

/// Densest-k-subgraph question: do some `kappa` vertices induce at least
/// `ell` edges? Vertices are 0-based.
struct DksInstance {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t kappa = 0;
  std::size_t ell = 0;

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(vertices, 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }

  std::size_t max_degree() const {
    auto deg = degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }

  /// Throws PreconditionViolated on self-loops, repeated or out-of-range
  /// edges, isolated vertices, or kappa > vertices.
  void validate() const {
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    for (auto [u, v] : edges) {
      if (u >= vertices || v >= vertices)
        throw PreconditionViolated("edge endpoint out of range");
      if (u == v)
        throw PreconditionViolated("self-loop on vertex " + std::to_string(u + 1));
      seen.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw PreconditionViolated("repeated edge");
    const auto deg = degrees();
    for (std::size_t v = 0; v < vertices; ++v)
      if (deg[v] == 0)
        throw PreconditionViolated("vertex " + std::to_string(v + 1) +
                                   " is isolated");
    if (kappa > vertices)
      throw PreconditionViolated("kappa exceeds the vertex count");
  }
};

/// Scheduling instance built from a DkS instance, with its layout.
/// Jobs: vertices [0, N), edges [N, N+M), then layers one, two and three.
struct DksReduction {
  Instance instance;
  std::size_t delta = 0;
  std::size_t machines = 0;
  std::size_t layer1 = 0, layer2 = 0, layer3 = 0;

  std::size_t first_layer_job(int layer) const {
    const std::size_t base = instance.size() - layer1 - layer2 - layer3;
    if (layer == 1)
      return base;
    if (layer == 2)
      return base + layer1;
    return base + layer1 + layer2;
  }
};

/// Generating arcs of the reduction (before closure), 0-based.
inline std::vector<Arc> dks_arcs(const DksInstance &d, std::size_t layer1,
                                 std::size_t layer2, std::size_t layer3) {
  const std::size_t n_vertices = d.vertices;
  const std::size_t n_edges = d.edges.size();
  std::vector<Arc> arcs;
  for (std::size_t e = 0; e < n_edges; ++e) {
    arcs.emplace_back(d.edges[e].first, n_vertices + e);
    arcs.emplace_back(d.edges[e].second, n_vertices + e);
  }
  const std::size_t l1 = n_vertices + n_edges;
  const std::size_t l2 = l1 + layer1;
  const std::size_t l3 = l2 + layer2;
  for (std::size_t a = 0; a < layer1; ++a)
    for (std::size_t b = 0; b < layer2; ++b)
      arcs.emplace_back(l1 + a, l2 + b);
  for (std::size_t b = 0; b < layer2; ++b)
    for (std::size_t c = 0; c < layer3; ++c)
      arcs.emplace_back(l2 + b, l3 + c);
  return arcs;
}

/// The instance has makespan 3 exactly when some kappa vertices induce at
/// least ell edges. m = 2*delta*N + 1 with delta the maximum degree.
inline DksReduction reduce_dks(const DksInstance &d) {
  d.validate();
  const auto n_vertices = static_cast<long long>(d.vertices);
  const auto n_edges = static_cast<long long>(d.edges.size());
  const auto kappa = static_cast<long long>(d.kappa);
  const auto ell = static_cast<long long>(d.ell);
  DksReduction r;
  r.delta = d.max_degree();
  const long long m = 2 * static_cast<long long>(r.delta) * n_vertices + 1;
  const long long l1 = m - kappa;
  const long long l2 = m + kappa - ell - n_vertices;
  const long long l3 = m + ell - n_edges;
  if (l1 < 0 || l2 < 0 || l3 < 0)
    throw NegativeLayer("layer sizes " + std::to_string(l1) + ", " +
                        std::to_string(l2) + ", " + std::to_string(l3) +
                        " are not all non-negative");
  r.machines = static_cast<std::size_t>(m);
  r.layer1 = static_cast<std::size_t>(l1);
  r.layer2 = static_cast<std::size_t>(l2);
  r.layer3 = static_cast<std::size_t>(l3);
  const std::size_t n = d.vertices + d.edges.size() + r.layer1 + r.layer2 + r.layer3;
  r.instance = make_instance(n, dks_arcs(d, r.layer1, r.layer2, r.layer3),
                             r.machines);
  return r;
}

/// Largest number of edges induced by any kappa vertices, by enumeration.
inline std::size_t den_kappa_oracle(const DksInstance &d,
                                    std::size_t max_vertices = 16) {
  if (d.vertices > max_vertices || d.vertices > 30)
    throw InstanceTooLarge("densest subgraph oracle is limited to " +
                           std::to_string(std::min<std::size_t>(max_vertices, 30)) +
                           " vertices");
  if (d.kappa > d.vertices)
    return 0;
  std::vector<std::uint32_t> edge_mask;
  for (auto [u, v] : d.edges)
    edge_mask.push_back((std::uint32_t{1} << u) | (std::uint32_t{1} << v));
  std::size_t best = 0;
  const std::uint32_t limit = std::uint32_t{1} << d.vertices;
  for (std::uint32_t s = 0; s < limit; ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) != d.kappa)
      continue;
    std::size_t count = 0;
    for (auto e : edge_mask)
      count += (e & s) == e;
    best = std::max(best, count);
  }
  return best;
}

} // namespace usched
