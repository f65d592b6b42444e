#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "usched/error.hpp"
#include "usched/job_set.hpp"

namespace usched {

using Arc = std::pair<JobId, JobId>;

/// Transitively closed precedence DAG. u precedes v iff v is in succ(u).
/// Immutable once built.
class PrecedenceGraph {
public:
  PrecedenceGraph() = default;

  std::size_t size() const { return succ_.size(); }
  const JobSet &jobs() const { return all_; }

  /// Strict successors / predecessors of a single job.
  const JobSet &succ(JobId v) const { return succ_[v]; }
  const JobSet &pred(JobId v) const { return pred_[v]; }

  JobSet succ(const JobSet &s) const {
    JobSet out;
    for (JobId v : s)
      out |= succ_[v];
    return out;
  }
  JobSet pred(const JobSet &s) const {
    JobSet out;
    for (JobId v : s)
      out |= pred_[v];
    return out;
  }
  /// succ[s] = succ(s) + s
  JobSet succ_closed(const JobSet &s) const { return succ(s) | s; }
  /// pred[s] = pred(s) + s
  JobSet pred_closed(const JobSet &s) const { return pred(s) | s; }

  bool precedes(JobId u, JobId v) const { return succ_[u].contains(v); }
  bool comparable(JobId u, JobId v) const {
    return precedes(u, v) || precedes(v, u);
  }
  /// succ(v) + pred(v)
  JobSet comparable_to(JobId v) const { return succ_[v] | pred_[v]; }

  const JobSet &sources() const { return sources_; }
  const JobSet &sinks() const { return sinks_; }

  /// Members of `s` with no successor inside `s`.
  JobSet sinks_in(const JobSet &s) const {
    JobSet out;
    for (JobId v : s)
      if (!succ_[v].intersects(s))
        out.insert(v);
    return out;
  }
  /// Members of `s` with no predecessor inside `s`.
  JobSet sources_in(const JobSet &s) const {
    JobSet out;
    for (JobId v : s)
      if (!pred_[v].intersects(s))
        out.insert(v);
    return out;
  }

  /// Number of arcs in the transitive closure.
  std::size_t closure_arc_count() const {
    std::size_t c = 0;
    for (const auto &s : succ_)
      c += s.size();
    return c;
  }
  /// Number of arcs passed to build_graph (duplicates included).
  std::size_t input_arc_count() const { return input_arcs_; }

  /// Longest chain length (number of jobs), 0 for the empty graph.
  std::size_t height() const {
    std::vector<std::size_t> level(size(), 1);
    std::size_t best = size() == 0 ? 0 : 1;
    for (JobId v : topological_order_) {
      for (JobId w : succ_[v])
        level[w] = std::max(level[w], level[v] + 1);
      best = std::max(best, level[v]);
    }
    return best;
  }

  /// Topological order by job ID among minimal elements.
  const std::vector<JobId> &topological_order() const {
    return topological_order_;
  }

  friend PrecedenceGraph build_graph(std::size_t n, const std::vector<Arc> &arcs);

private:
  std::vector<JobSet> succ_;
  std::vector<JobSet> pred_;
  JobSet all_;
  JobSet sources_;
  JobSet sinks_;
  std::vector<JobId> topological_order_;
  std::size_t input_arcs_ = 0;
};

/// Builds the transitive closure of the relation given by `arcs` (u before v).
/// Duplicate and implied arcs are accepted; self-loops count as cycles.
inline PrecedenceGraph build_graph(std::size_t n, const std::vector<Arc> &arcs) {
  if (n > kMaxJobs)
    throw InstanceTooLarge("instance has " + std::to_string(n) +
                           " jobs; capacity is " + std::to_string(kMaxJobs));
  std::vector<JobSet> direct(n);
  for (const auto &[u, v] : arcs) {
    if (u >= n || v >= n)
      throw PreconditionViolated("arc (" + std::to_string(u) + "," +
                                 std::to_string(v) + ") out of range");
    if (u == v)
      throw CycleDetected(u, "self-loop on job " + std::to_string(u));
    direct[u].insert(v);
  }

  // Kahn's algorithm, smallest ready job first.
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (JobId v : direct[u])
      ++indegree[v];
  JobSet ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0)
      ready.insert(v);
  std::vector<JobId> order;
  order.reserve(n);
  while (!ready.empty()) {
    JobId v = ready.first();
    ready.erase(v);
    order.push_back(v);
    for (JobId w : direct[v])
      if (--indegree[w] == 0)
        ready.insert(w);
  }
  if (order.size() != n) {
    // Every leftover job has a leftover predecessor; walk backwards until a
    // job repeats, which must lie on a cycle.
    std::vector<char> left(n, 0);
    for (std::size_t v = 0; v < n; ++v)
      left[v] = indegree[v] > 0;
    std::vector<std::vector<JobId>> back(n);
    for (std::size_t u = 0; u < n; ++u)
      for (JobId v : direct[u])
        if (left[u] && left[v])
          back[v].push_back(u);
    JobId cur = 0;
    while (!left[cur])
      ++cur;
    std::vector<char> seen(n, 0);
    while (!seen[cur]) {
      seen[cur] = 1;
      cur = back[cur].front();
    }
    throw CycleDetected(cur, "precedence cycle through job " +
                                 std::to_string(cur));
  }

  PrecedenceGraph g;
  g.succ_.assign(n, JobSet{});
  g.pred_.assign(n, JobSet{});
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    JobId v = *it;
    for (JobId w : direct[v]) {
      g.succ_[v].insert(w);
      g.succ_[v] |= g.succ_[w];
    }
  }
  for (std::size_t v = 0; v < n; ++v)
    for (JobId w : g.succ_[v])
      g.pred_[w].insert(v);
  g.all_ = JobSet::prefix(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (g.pred_[v].empty())
      g.sources_.insert(v);
    if (g.succ_[v].empty())
      g.sinks_.insert(v);
  }
  g.topological_order_ = std::move(order);
  g.input_arcs_ = arcs.size();
  return g;
}

/// Arcs of the closure, sorted.
inline std::vector<Arc> closure_arcs(const PrecedenceGraph &g) {
  std::vector<Arc> out;
  for (JobId u = 0; u < g.size(); ++u)
    for (JobId v : g.succ(u))
      out.emplace_back(u, v);
  return out;
}

/// Copy of `g` with one extra job (ID g.size()) preceding every other job.
inline PrecedenceGraph with_super_source(const PrecedenceGraph &g) {
  const std::size_t n = g.size();
  if (n + 1 > kMaxJobs)
    throw InstanceTooLarge("no room for a super-source: " + std::to_string(n) +
                           " jobs at capacity " + std::to_string(kMaxJobs));
  std::vector<Arc> arcs = closure_arcs(g);
  for (JobId v = 0; v < n; ++v)
    arcs.emplace_back(n, v);
  return build_graph(n + 1, arcs);
}

/// Subgraph induced by `keep`, relabelled densely in increasing ID order.
/// `original[i]` is the ID in `g` of new job i.
struct InducedGraph {
  PrecedenceGraph graph;
  std::vector<JobId> original;
};

inline InducedGraph induced_subgraph(const PrecedenceGraph &g,
                                     const JobSet &keep) {
  InducedGraph out;
  out.original = keep.to_vector();
  std::vector<std::size_t> index(g.size(), 0);
  for (std::size_t i = 0; i < out.original.size(); ++i)
    index[out.original[i]] = i;
  std::vector<Arc> arcs;
  for (JobId u : keep)
    for (JobId v : g.succ(u) & keep)
      arcs.emplace_back(index[u], index[v]);
  out.graph = build_graph(out.original.size(), arcs);
  return out;
}

inline bool is_antichain(const PrecedenceGraph &g, const JobSet &s) {
  for (JobId v : s)
    if (g.succ(v).intersects(s))
      return false;
  return true;
}

/// Int<A,B> = succ(A) & pred[B]; the closed variant uses succ[A].
struct Interval {
  JobSet source;
  JobSet sink;
  JobSet jobs;
  bool closed = false;
};

inline Interval interval(const PrecedenceGraph &g, const JobSet &a,
                         const JobSet &b, bool closed) {
  if (!is_antichain(g, a) || !is_antichain(g, b))
    throw PreconditionViolated("interval endpoints must be antichains");
  if (!b.is_subset_of(g.succ(a)))
    throw PreconditionViolated("interval sink slot is not inside succ(A)");
  Interval iv;
  iv.source = a;
  iv.sink = b;
  iv.closed = closed;
  iv.jobs = (closed ? g.succ_closed(a) : g.succ(a)) & g.pred_closed(b);
  return iv;
}

/// sinks(G[jobs & succ(X) - (succ(Y) + B)])
inline JobSet new_sinks(const PrecedenceGraph &g, const JobSet &jobs,
                        const JobSet &b, const JobSet &x, const JobSet &y) {
  if (!x.is_subset_of(jobs) || !y.is_subset_of(jobs))
    throw PreconditionViolated("slot pair must lie inside the job set");
  if (!is_antichain(g, x) || !is_antichain(g, y))
    throw PreconditionViolated("slot pair members must be antichains");
  const JobSet succ_x = g.succ(x);
  if (!y.is_subset_of(succ_x))
    throw PreconditionViolated("second slot is not inside succ(first)");
  return g.sinks_in((jobs & succ_x) - (g.succ(y) | b));
}

namespace detail {

template <typename Fn>
void extend_antichains(const PrecedenceGraph &g, JobSet &current,
                       const JobSet &candidates, std::size_t room, Fn &fn) {
  fn(static_cast<const JobSet &>(current));
  if (room == 0)
    return;
  JobSet rest = candidates;
  while (!rest.empty()) {
    JobId v = rest.first();
    rest.erase(v);
    current.insert(v);
    extend_antichains(g, current, rest - g.comparable_to(v), room - 1, fn);
    current.erase(v);
  }
}

} // namespace detail

/// Calls fn(X) for every antichain X inside `pool` with |X| <= max_size,
/// including the empty set. Order: depth-first, members added in
/// increasing ID order.
template <typename Fn>
void for_each_antichain(const PrecedenceGraph &g, const JobSet &pool,
                        std::size_t max_size, Fn &&fn) {
  JobSet current;
  detail::extend_antichains(g, current, pool, max_size, fn);
}

inline std::vector<JobSet> antichains(const PrecedenceGraph &g,
                                      const JobSet &pool,
                                      std::size_t max_size) {
  std::vector<JobSet> out;
  for_each_antichain(g, pool, max_size,
                     [&](const JobSet &x) { out.push_back(x); });
  return out;
}

/// A pair of consecutive slots: `later` is a subset of succ(`earlier`).
struct SlotPair {
  JobSet earlier;
  JobSet later;

  friend bool operator==(const SlotPair &, const SlotPair &) = default;
};

struct SlotPairHash {
  std::size_t operator()(const SlotPair &p) const noexcept {
    return p.earlier.hash() * 31 + p.later.hash();
  }
};

/// Every pair of antichains X, Y inside `jobs` with |X|,|Y| <= m and
/// Y inside succ(X), each exactly once.
template <typename Fn>
void for_each_slot_pair(const PrecedenceGraph &g, const JobSet &jobs,
                        std::size_t m, Fn &&fn) {
  for_each_antichain(g, jobs, m, [&](const JobSet &x) {
    const JobSet above = jobs & g.succ(x);
    for_each_antichain(g, above, m, [&](const JobSet &y) {
      fn(SlotPair{x, y});
    });
  });
}

inline std::vector<SlotPair> enumerate_slot_pairs(const PrecedenceGraph &g,
                                                  const JobSet &jobs,
                                                  std::size_t m) {
  if (m == 0)
    throw PreconditionViolated("machine count must be at least 1");
  std::vector<SlotPair> out;
  for_each_slot_pair(g, jobs, m, [&](const SlotPair &p) { out.push_back(p); });
  return out;
}

} // namespace usched
