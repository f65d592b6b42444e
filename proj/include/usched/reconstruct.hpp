#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "usched/error.hpp"
#include "usched/job_set.hpp"
#include "usched/prec_graph.hpp"
#include "usched/schedule.hpp"

namespace usched {

/// Larger than any feasible makespan; sums saturate here.
inline constexpr int kInfinity = std::numeric_limits<int>::max() / 4;

inline int saturating_add(int a, int b) {
  if (a >= kInfinity || b >= kInfinity)
    return kInfinity;
  return std::min(a + b, kInfinity);
}

/// Optimal makespans |sigma[Y,X]| of the jobs succ(Y) - (succ[X] + sinks),
/// keyed by the slot pair (Y earlier, X later).
class SubscheduleTable {
public:
  void set(const JobSet &earlier, const JobSet &later, int makespan) {
    entries_[SlotPair{earlier, later}] = Entry{makespan, std::nullopt};
  }
  void set(const JobSet &earlier, const JobSet &later, int makespan,
           Schedule witness) {
    entries_[SlotPair{earlier, later}] = Entry{makespan, std::move(witness)};
  }

  std::optional<int> find(const JobSet &earlier, const JobSet &later) const {
    auto it = entries_.find(SlotPair{earlier, later});
    if (it == entries_.end())
      return std::nullopt;
    return it->second.makespan;
  }

  int at(const JobSet &earlier, const JobSet &later) const {
    auto it = entries_.find(SlotPair{earlier, later});
    if (it == entries_.end()) {
      std::ostringstream os;
      os << "no subschedule for slots " << earlier << " -> " << later;
      throw MissingSubschedule(os.str());
    }
    return it->second.makespan;
  }

  const Schedule *witness(const JobSet &earlier, const JobSet &later) const {
    auto it = entries_.find(SlotPair{earlier, later});
    if (it == entries_.end() || !it->second.witness)
      return nullptr;
    return &*it->second.witness;
  }

  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

private:
  struct Entry {
    int makespan;
    std::optional<Schedule> witness;
  };
  std::unordered_map<SlotPair, Entry, SlotPairHash> entries_;
};

/// One separator slot of the optimal decomposition: its non-sink part and
/// how many sinks run next to it.
struct ReconstructStep {
  JobSet slot;
  std::size_t sinks = 0;

  friend bool operator==(const ReconstructStep &,
                         const ReconstructStep &) = default;
};

struct ReconstructResult {
  int makespan = 0;
  /// steps[0] is S_0; later steps are S_1..S_l in order.
  std::vector<ReconstructStep> steps;
  /// Sinks packed after the last separator slot.
  std::size_t trailing_sinks = 0;
  /// Number of (Y, X) subschedule lookups the recursion made.
  std::size_t pairs_consulted = 0;
  std::size_t separator_slots = 0;
};

namespace detail {

inline std::size_t ceil_div(std::size_t a, std::size_t b) {
  return (a + b - 1) / b;
}

/// Sinks of the scope whose predecessors all avoid succ[X].
inline JobSet ready_sinks(const PrecedenceGraph &g, const JobSet &scope,
                          const JobSet &sinks, const JobSet &x) {
  const JobSet blocked = (g.succ(x) | x) & scope;
  JobSet out;
  for (JobId v : sinks)
    if (!g.pred(v).intersects(blocked))
      out.insert(v);
  return out;
}

} // namespace detail

/// Separator slots of G[scope]: S_0 minus its sinks first, then every
/// antichain of at most m jobs that are neither sources nor sinks.
inline std::vector<JobSet> separator_slot_candidates(const PrecedenceGraph &g,
                                                     std::size_t m,
                                                     const JobSet &scope) {
  const JobSet sources = g.sources_in(scope);
  const JobSet sinks = g.sinks_in(scope);
  const JobSet first_slot = sources - sinks;
  std::vector<JobSet> slots{first_slot};
  for_each_antichain(g, scope - sinks - sources, m, [&](const JobSet &x) {
    if (!(x.empty() && first_slot.empty()))
      slots.push_back(x);
  });
  return slots;
}

/// Jobs of sigma[earlier, later]: succ(earlier) - (succ[later] + sinks),
/// all inside `scope`.
inline JobSet subschedule_jobs(const PrecedenceGraph &g, const JobSet &scope,
                               const JobSet &earlier, const JobSet &later) {
  return (g.succ(earlier) & scope) -
         (g.succ_closed(later) | g.sinks_in(scope));
}

/// Full DP table of one reconstruct run, for inspection.
struct ReconstructTable {
  std::vector<JobSet> slots;
  std::size_t width = 0; ///< |sinks| + 1
  std::vector<int> dp;

  int at(std::size_t slot, std::size_t sinks) const {
    return dp[slot * width + sinks];
  }
};

/// Minimum makespan of G[scope] from the subschedule table, by dynamic
/// programming over partial schedules that end in a separator slot.
/// `scope` must be convex (closed under betweenness); every set operation is
/// restricted to it.
inline ReconstructResult reconstruct(const PrecedenceGraph &g, std::size_t m,
                                     const SubscheduleTable &subs,
                                     const JobSet &scope,
                                     ReconstructTable *table_out = nullptr) {
  if (m == 0)
    throw PreconditionViolated("machine count must be at least 1");
  ReconstructResult result;
  if (scope.empty())
    return result;

  const JobSet sources = g.sources_in(scope);
  if (sources.size() > m)
    throw SourceOverflow("graph has " + std::to_string(sources.size()) +
                         " sources but only " + std::to_string(m) +
                         " machines");
  const JobSet sinks = g.sinks_in(scope);
  const std::size_t total_sinks = sinks.size();
  const std::size_t first_sinks = (sources & sinks).size();

  const std::vector<JobSet> slots = separator_slot_candidates(g, m, scope);
  const std::size_t count = slots.size();
  result.separator_slots = count;

  std::vector<JobSet> succ(count);
  std::vector<std::size_t> ready(count);
  for (std::size_t i = 0; i < count; ++i) {
    succ[i] = g.succ(slots[i]) & scope;
    ready[i] = detail::ready_sinks(g, scope, sinks, slots[i]).size();
  }
  // Y must be settled before any X inside succ(Y); such X has strictly
  // smaller succ(X).
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return succ[a].size() > succ[b].size();
  });

  const std::size_t width = total_sinks + 1;
  std::vector<int> dp(count * width, kInfinity);
  struct Choice {
    std::int32_t prev = -1;
    std::int32_t added = 0;
  };
  std::vector<Choice> choice(count * width);
  std::vector<char> live(count, 0);

  for (std::size_t x : order) {
    const JobSet &xs = slots[x];
    int *row = &dp[x * width];
    Choice *why = &choice[x * width];
    if (x == 0 && first_sinks <= ready[x])
      row[first_sinks] = 1;
    const bool meets_sources = x == 0 && !xs.empty();
    if (!meets_sources) {
      const std::size_t room = m - std::min(m, xs.size());
      auto relax = [&](std::size_t y) {
        const int sigma = subs.at(slots[y], xs);
        ++result.pairs_consulted;
        const int *prev = &dp[y * width];
        for (std::size_t k = 0; k <= std::min(total_sinks, ready[x]); ++k)
          for (std::size_t added = 0; added <= std::min(k, room); ++added) {
            if (y == x && added == 0)
              continue;
            int cand = saturating_add(prev[k - added], sigma + 1);
            if (cand < row[k]) {
              row[k] = cand;
              why[k] = Choice{static_cast<std::int32_t>(y),
                              static_cast<std::int32_t>(added)};
            }
          }
      };
      std::optional<std::size_t> self;
      for (std::size_t y : order) {
        if (!live[y] && y != x)
          continue;
        if (y == x) {
          if (xs.empty())
            self = y;
          continue;
        }
        if (xs.is_subset_of(succ[y]))
          relax(y);
      }
      if (self)
        relax(*self);
    }
    live[x] = std::any_of(row, row + width, [](int v) { return v < kInfinity; });
  }

  int best = kInfinity;
  std::size_t best_slot = 0, best_tail = 0;
  for (std::size_t x = 0; x < count; ++x) {
    if (!live[x] || !succ[x].is_subset_of(sinks))
      continue;
    for (std::size_t tail = 0; tail <= total_sinks; ++tail) {
      int cand = saturating_add(
          dp[x * width + (total_sinks - tail)],
          static_cast<int>(detail::ceil_div(tail, m)));
      if (cand < best) {
        best = cand;
        best_slot = x;
        best_tail = tail;
      }
    }
  }
  if (table_out)
    *table_out = ReconstructTable{slots, width, dp};
  if (best >= kInfinity)
    throw std::logic_error("reconstruct found no schedule");

  result.makespan = best;
  result.trailing_sinks = best_tail;
  std::size_t x = best_slot, k = total_sinks - best_tail;
  for (;;) {
    const Choice c = choice[x * width + k];
    if (c.prev < 0) {
      result.steps.push_back({slots[x], k});
      break;
    }
    result.steps.push_back({slots[x], static_cast<std::size_t>(c.added)});
    k -= static_cast<std::size_t>(c.added);
    x = static_cast<std::size_t>(c.prev);
  }
  std::reverse(result.steps.begin(), result.steps.end());
  return result;
}

inline ReconstructResult reconstruct(const PrecedenceGraph &g, std::size_t m,
                                     const SubscheduleTable &subs,
                                     ReconstructTable *table_out = nullptr) {
  return reconstruct(g, m, subs, g.jobs(), table_out);
}

/// Rebuilds a schedule realising `r`: S_0, then for each later step the
/// subschedule between consecutive separator slots followed by the slot
/// itself padded with ready sinks (smallest IDs first), then the leftover
/// sinks m at a time. `sub_witness(Y, X)` returns sigma[Y,X].
template <typename SubWitness>
Schedule expand_witness(const PrecedenceGraph &g, std::size_t m,
                        const ReconstructResult &r, const JobSet &scope,
                        SubWitness &&sub_witness) {
  Schedule out;
  out.machines = m;
  if (scope.empty())
    return out;
  if (r.steps.empty())
    throw WitnessUnavailable("reconstruct result carries no choice chain");
  const JobSet sources = g.sources_in(scope);
  const JobSet sinks = g.sinks_in(scope);
  JobSet used = sources & sinks;
  out.slots.push_back(sources);
  for (std::size_t q = 1; q < r.steps.size(); ++q) {
    const JobSet &y = r.steps[q - 1].slot;
    const JobSet &x = r.steps[q].slot;
    out.append(static_cast<const Schedule &>(sub_witness(y, x)));
    JobSet slot = x;
    std::size_t need = r.steps[q].sinks;
    for (JobId v : detail::ready_sinks(g, scope, sinks, x) - used) {
      if (need == 0)
        break;
      slot.insert(v);
      used.insert(v);
      --need;
    }
    if (need != 0)
      throw WitnessUnavailable("not enough ready sinks for a separator slot");
    out.slots.push_back(slot);
  }
  JobSet rest = sinks - used;
  if (rest.size() != r.trailing_sinks)
    throw WitnessUnavailable("trailing sink count does not match the chain");
  JobSet slot;
  for (JobId v : rest) {
    slot.insert(v);
    if (slot.size() == m) {
      out.slots.push_back(slot);
      slot = JobSet{};
    }
  }
  if (!slot.empty())
    out.slots.push_back(slot);
  if (out.makespan() != static_cast<std::size_t>(r.makespan))
    throw WitnessUnavailable("expanded witness has makespan " +
                             std::to_string(out.makespan()) + ", expected " +
                             std::to_string(r.makespan));
  return out;
}

/// Witness expansion from subschedules stored in the table.
inline Schedule expand_witness(const PrecedenceGraph &g, std::size_t m,
                               const SubscheduleTable &subs,
                               const ReconstructResult &r,
                               const JobSet &scope) {
  return expand_witness(g, m, r, scope,
                        [&](const JobSet &y, const JobSet &x) -> Schedule {
                          const int value = subs.at(y, x);
                          if (const Schedule *w = subs.witness(y, x))
                            return *w;
                          if (value == 0)
                            return Schedule{{}, m};
                          std::ostringstream os;
                          os << "no witness for subschedule " << y << " -> "
                             << x;
                          throw WitnessUnavailable(os.str());
                        });
}

inline Schedule expand_witness(const PrecedenceGraph &g, std::size_t m,
                               const SubscheduleTable &subs,
                               const ReconstructResult &r) {
  return expand_witness(g, m, subs, r, g.jobs());
}

} // namespace usched
