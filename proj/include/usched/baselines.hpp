#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "usched/error.hpp"
#include "usched/instance.hpp"
#include "usched/job_set.hpp"
#include "usched/prec_graph.hpp"
#include "usched/schedule.hpp"

namespace usched {

struct BruteOptions {
  std::size_t max_jobs = 12;
};

/// Exhaustive search over every nonempty set of at most m available jobs
/// per slot, memoised on the set of finished jobs.
inline SolveReport solve_brute(const Instance &inst,
                               const BruteOptions &opts = {}) {
  detail::Stopwatch clock;
  const PrecedenceGraph &g = inst.graph;
  const std::size_t n = g.size();
  const std::size_t m = inst.machines;
  if (m == 0)
    throw PreconditionViolated("machine count must be at least 1");
  if (n > opts.max_jobs || n > 24)
    throw InstanceTooLarge("brute force is limited to " +
                           std::to_string(std::min<std::size_t>(opts.max_jobs, 24)) +
                           " jobs, got " + std::to_string(n));
  std::vector<std::uint32_t> need(n, 0);
  for (JobId v = 0; v < n; ++v)
    for (JobId u : g.pred(v))
      need[v] |= std::uint32_t{1} << u;
  const std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
  constexpr int kUnknown = -1;
  std::vector<int> rest(std::size_t{1} << n, kUnknown);
  std::vector<std::uint32_t> pick(std::size_t{1} << n, 0);
  SolveReport report;
  report.algorithm = Algorithm::brute;

  auto solve = [&](auto &self, std::uint32_t done) -> int {
    if (done == full)
      return 0;
    if (rest[done] != kUnknown) {
      ++report.memo_hits;
      return rest[done];
    }
    ++report.nodes;
    std::uint32_t avail = 0;
    for (JobId v = 0; v < n; ++v)
      if (!(done >> v & 1) && (need[v] & ~done) == 0)
        avail |= std::uint32_t{1} << v;
    int best = static_cast<int>(n) + 1;
    std::uint32_t best_pick = 0;
    for (std::uint32_t sub = avail; sub != 0; sub = (sub - 1) & avail) {
      if (static_cast<std::size_t>(std::popcount(sub)) > m)
        continue;
      const int cand = 1 + self(self, done | sub);
      if (cand < best) {
        best = cand;
        best_pick = sub;
      }
    }
    rest[done] = best;
    pick[done] = best_pick;
    return best;
  };
  report.makespan = solve(solve, 0);

  Schedule s;
  s.machines = m;
  for (std::uint32_t done = 0; done != full;) {
    JobSet slot;
    for (JobId v = 0; v < n; ++v)
      if (pick[done] >> v & 1)
        slot.insert(v);
    s.slots.push_back(slot);
    done |= pick[done];
  }
  report.witness = std::move(s);
  report.wall_ms = clock.elapsed_ms();
  return report;
}

/// Jobs with identical predecessor and successor sets, grouped. Classes are
/// antichains and come in order of their smallest member.
inline std::vector<JobSet> twin_classes(const PrecedenceGraph &g) {
  std::vector<JobSet> classes;
  std::vector<JobId> rep;
  for (JobId v = 0; v < g.size(); ++v) {
    bool placed = false;
    for (std::size_t c = 0; c < classes.size(); ++c)
      if (g.pred(rep[c]) == g.pred(v) && g.succ(rep[c]) == g.succ(v)) {
        classes[c].insert(v);
        placed = true;
        break;
      }
    if (!placed) {
      classes.push_back(JobSet::single(v));
      rep.push_back(v);
    }
  }
  return classes;
}

struct AntichainDpOptions {
  std::size_t max_classes = 30;
  std::size_t max_states = 20'000'000;
};

/// Shortest path over downward-closed job sets. Twins are interchangeable,
/// so a state only records how many jobs of each class are done (the
/// smallest IDs), and every slot is filled to min(m, available).
inline SolveReport solve_antichain_dp(const Instance &inst,
                                      const AntichainDpOptions &opts = {}) {
  detail::Stopwatch clock;
  const PrecedenceGraph &g = inst.graph;
  const std::size_t n = g.size();
  const std::size_t m = inst.machines;
  if (m == 0)
    throw PreconditionViolated("machine count must be at least 1");
  const std::vector<JobSet> classes = twin_classes(g);
  if (classes.size() > opts.max_classes)
    throw InstanceTooLarge(std::to_string(classes.size()) +
                           " twin classes exceed the limit of " +
                           std::to_string(opts.max_classes));
  SolveReport report;
  report.algorithm = Algorithm::antichain_dp;
  if (n == 0) {
    report.witness = Schedule{{}, m};
    report.wall_ms = clock.elapsed_ms();
    return report;
  }

  const std::size_t k = classes.size();
  std::vector<std::vector<JobId>> members(k);
  std::vector<JobSet> need(k);
  for (std::size_t c = 0; c < k; ++c) {
    members[c] = classes[c].to_vector();
    need[c] = g.pred(members[c].front());
  }

  std::unordered_map<JobSet, JobSet, JobSetHash> parent;
  std::vector<JobSet> frontier{JobSet{}};
  parent.emplace(JobSet{}, JobSet{});
  const JobSet all = g.jobs();
  std::size_t depth = 0;
  bool finished = false;

  std::vector<std::size_t> done_count(k), avail(k), take(k);
  while (!finished && !frontier.empty()) {
    ++depth;
    std::vector<JobSet> next;
    for (const JobSet &state : frontier) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < k; ++c) {
        done_count[c] = (classes[c] & state).size();
        avail[c] = need[c].is_subset_of(state) ? members[c].size() - done_count[c] : 0;
        total += avail[c];
      }
      const std::size_t quota = std::min(m, total);
      // Distribute `quota` jobs over the classes, class by class.
      auto emit = [&]() {
        JobSet out = state;
        for (std::size_t c = 0; c < k; ++c)
          for (std::size_t q = 0; q < take[c]; ++q)
            out.insert(members[c][done_count[c] + q]);
        ++report.nodes;
        if (parent.emplace(out, state).second) {
          if (parent.size() > opts.max_states)
            throw InstanceTooLarge("antichain DP exceeded " +
                                   std::to_string(opts.max_states) + " states");
          if (out == all)
            finished = true;
          next.push_back(out);
        } else {
          ++report.memo_hits;
        }
      };
      std::vector<std::size_t> suffix(k + 1, 0);
      for (std::size_t c = k; c-- > 0;)
        suffix[c] = suffix[c + 1] + avail[c];
      auto distribute = [&](auto &self, std::size_t c, std::size_t left) -> void {
        if (finished)
          return;
        if (c == k) {
          if (left == 0)
            emit();
          return;
        }
        if (suffix[c] < left)
          return;
        const std::size_t hi = std::min(avail[c], left);
        for (std::size_t x = hi + 1; x-- > 0;) {
          take[c] = x;
          self(self, c + 1, left - x);
        }
        take[c] = 0;
      };
      distribute(distribute, 0, quota);
      if (finished)
        break;
    }
    frontier = std::move(next);
  }
  if (!finished)
    throw std::logic_error("antichain DP did not reach the full job set");
  report.makespan = static_cast<int>(depth);

  std::vector<JobSet> slots;
  for (JobSet cur = all; !cur.empty();) {
    const JobSet prev = parent.at(cur);
    slots.push_back(cur - prev);
    cur = prev;
  }
  std::reverse(slots.begin(), slots.end());
  report.witness = Schedule{std::move(slots), m};
  report.wall_ms = clock.elapsed_ms();
  return report;
}

} // namespace usched
