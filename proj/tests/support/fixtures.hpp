#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "support/oracle.hpp"
#include "usched/usched.hpp"

namespace fixtures {

using usched::Arc;
using usched::Instance;
using usched::JobSet;

inline Instance make(std::size_t n, const std::vector<Arc> &arcs, std::size_t m) {
  return usched::make_instance(n, arcs, m);
}

struct RandomCase {
  std::size_t n = 0;
  std::size_t m = 1;
  std::vector<Arc> arcs;
  Instance inst;
};

/// Random DAG on n jobs with arc density drawn from [0, max_p).
inline RandomCase random_case(std::mt19937_64 &rng, std::size_t max_n,
                              std::size_t max_m, double max_p = 0.6,
                              std::size_t min_n = 0) {
  RandomCase c;
  c.n = min_n + rng() % (max_n - min_n + 1);
  c.m = 1 + rng() % max_m;
  const double p = static_cast<double>(rng() % 1000) / 1000.0 * max_p;
  c.arcs = oracle::random_dag(c.n, p, rng);
  c.inst = make(c.n, c.arcs, c.m);
  return c;
}

/// Random case whose graph has at most m sources (rejection sampling).
inline RandomCase random_case_few_sources(std::mt19937_64 &rng,
                                          std::size_t max_n, std::size_t max_m) {
  for (;;) {
    RandomCase c = random_case(rng, max_n, max_m, 0.7, 1);
    if (c.inst.graph.sources().size() <= c.m)
      return c;
  }
}

/// A feasible schedule that places jobs in a random topological order, each
/// at a random slot among the first few the precedences allow. May contain
/// empty slots.
inline usched::Schedule random_feasible_schedule(const usched::PrecedenceGraph &g,
                                                 std::size_t m,
                                                 std::mt19937_64 &rng) {
  const std::size_t n = g.size();
  std::vector<std::size_t> slot_of(n, 0);
  JobSet placed;
  usched::Schedule s;
  s.machines = m;
  while (placed.size() < n) {
    std::vector<usched::JobId> ready;
    for (usched::JobId v = 0; v < n; ++v)
      if (!placed.contains(v) && g.pred(v).is_subset_of(placed))
        ready.push_back(v);
    const usched::JobId v = ready[rng() % ready.size()];
    std::size_t earliest = 0;
    for (usched::JobId u : g.pred(v))
      earliest = std::max(earliest, slot_of[u] + 1);
    std::size_t t = earliest + rng() % 3;
    for (;; ++t) {
      if (t >= s.slots.size())
        s.slots.resize(t + 1);
      if (s.slots[t].size() < m)
        break;
    }
    s.slots[t].insert(v);
    slot_of[v] = t;
    placed.insert(v);
  }
  return s;
}

/// Optimal schedule of G[jobs] by brute force, in the IDs of g.
inline usched::Schedule optimal_subschedule(const usched::PrecedenceGraph &g,
                                            std::size_t m, const JobSet &jobs) {
  if (jobs.empty())
    return usched::Schedule{{}, m};
  auto sub = usched::induced_subgraph(g, jobs);
  auto rep = usched::solve_brute(Instance{sub.graph, m});
  usched::Schedule out;
  out.machines = m;
  for (const auto &slot : rep.witness->slots) {
    JobSet mapped;
    for (auto v : slot)
      mapped.insert(sub.original[v]);
    out.slots.push_back(mapped);
  }
  return out;
}

/// Subschedule table over every pair reconstruct may consult, each entry an
/// optimal schedule found by brute force.
inline usched::SubscheduleTable brute_table(const usched::PrecedenceGraph &g,
                                            std::size_t m) {
  usched::SubscheduleTable table;
  const JobSet scope = g.jobs();
  const auto slots = usched::separator_slot_candidates(g, m, scope);
  for (const auto &y : slots)
    for (const auto &x : slots)
      if (x.is_subset_of(g.succ(y)) || (x.empty() && y.empty())) {
        auto s = optimal_subschedule(g, m, usched::subschedule_jobs(g, scope, y, x));
        const int len = static_cast<int>(s.makespan());
        table.set(y, x, len, std::move(s));
      }
  return table;
}

} // namespace fixtures
