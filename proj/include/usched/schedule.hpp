#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "usched/error.hpp"
#include "usched/job_set.hpp"
#include "usched/prec_graph.hpp"

namespace usched {

/// Ordered timeslots; slot i holds the jobs started at time i+1.
struct Schedule {
  std::vector<JobSet> slots;
  std::size_t machines = 1;

  std::size_t makespan() const { return slots.size(); }

  JobSet jobs() const {
    JobSet out;
    for (const auto &s : slots)
      out |= s;
    return out;
  }

  /// this + other (concatenation)
  Schedule &append(const Schedule &other) {
    slots.insert(slots.end(), other.slots.begin(), other.slots.end());
    return *this;
  }
  Schedule &append(const JobSet &slot) {
    slots.push_back(slot);
    return *this;
  }

  friend bool operator==(const Schedule &, const Schedule &) = default;
};

enum class Violation { none, coverage, capacity, precedence };

inline const char *to_string(Violation v) {
  switch (v) {
  case Violation::none:
    return "none";
  case Violation::coverage:
    return "coverage";
  case Violation::capacity:
    return "capacity";
  case Violation::precedence:
    return "precedence";
  }
  return "?";
}

struct FeasibilityVerdict {
  Violation violation = Violation::none;
  std::string message;

  bool ok() const { return violation == Violation::none; }
  explicit operator bool() const { return ok(); }
};

/// Checks that `s` is a feasible schedule for exactly `jobs`: slots are
/// disjoint and cover `jobs`, each holds at most s.machines jobs, and every
/// precedence between scheduled jobs goes strictly forward in time.
inline FeasibilityVerdict check_feasible(const PrecedenceGraph &g,
                                         const Schedule &s,
                                         const JobSet &jobs) {
  JobSet seen;
  for (std::size_t i = 0; i < s.slots.size(); ++i) {
    if (seen.intersects(s.slots[i]))
      return {Violation::coverage,
              "job " + std::to_string((seen & s.slots[i]).first() + 1) +
                  " appears in more than one slot"};
    seen |= s.slots[i];
  }
  if (seen != jobs) {
    JobSet extra = seen - jobs;
    if (!extra.empty())
      return {Violation::coverage,
              "job " + std::to_string(extra.first() + 1) + " is not expected"};
    return {Violation::coverage, "job " +
                                     std::to_string((jobs - seen).first() + 1) +
                                     " is never scheduled"};
  }
  for (std::size_t i = 0; i < s.slots.size(); ++i)
    if (s.slots[i].size() > s.machines)
      return {Violation::capacity,
              "slot " + std::to_string(i + 1) + " holds " +
                  std::to_string(s.slots[i].size()) + " jobs on " +
                  std::to_string(s.machines) + " machines"};
  JobSet later;
  for (std::size_t i = s.slots.size(); i-- > 0;) {
    later |= s.slots[i];
    for (JobId v : s.slots[i]) {
      JobSet bad = g.pred(v) & later;
      if (!bad.empty())
        return {Violation::precedence,
                "job " + std::to_string(bad.first() + 1) + " must precede job " +
                    std::to_string(v + 1) + " but is not scheduled earlier"};
    }
  }
  return {};
}

struct Conflict {
  JobId job;
  std::size_t slot; ///< 0-based index of the earlier timeslot

  friend bool operator==(const Conflict &, const Conflict &) = default;
};

/// Smallest (slot, job) pair in conflict: a non-sink v in a later slot whose
/// predecessors all finish before `slot`, while `slot` runs fewer than m
/// non-sinks.
inline std::optional<Conflict> find_conflict(const PrecedenceGraph &g,
                                             const Schedule &s) {
  const JobSet &sinks = g.sinks();
  JobSet before;
  for (std::size_t i = 0; i < s.slots.size(); ++i) {
    if ((s.slots[i] - sinks).size() < s.machines) {
      std::optional<JobId> best;
      for (std::size_t j = i + 1; j < s.slots.size(); ++j)
        for (JobId v : s.slots[j] - sinks)
          if (g.pred(v).is_subset_of(before) && (!best || v < *best))
            best = v;
      if (best)
        return Conflict{*best, i};
    }
    before |= s.slots[i];
  }
  return std::nullopt;
}

namespace detail {

inline void drop_empty_slots(Schedule &s) {
  std::erase_if(s.slots, [](const JobSet &t) { return t.empty(); });
}

} // namespace detail

/// One Resolve-Conflicts step: moves the conflicting job into the earlier
/// slot, swapping out the smallest sink there if the slot is full.
inline void resolve_one_conflict(const PrecedenceGraph &g, Schedule &s,
                                 const Conflict &c) {
  JobSet &target = s.slots[c.slot];
  std::size_t from = c.slot + 1;
  while (!s.slots[from].contains(c.job))
    ++from;
  s.slots[from].erase(c.job);
  if (target.size() >= s.machines) {
    JobId sink = (target & g.sinks()).first();
    target.erase(sink);
    s.slots[from].insert(sink);
  }
  target.insert(c.job);
}

/// Moves non-sinks earlier until no conflict remains. When the graph has at
/// most m sources they are first gathered into the first slot. Empty slots
/// left behind are removed, so the makespan never grows.
inline Schedule resolve_conflicts(const PrecedenceGraph &g, Schedule s) {
  if (auto v = check_feasible(g, s, g.jobs()); !v)
    throw InfeasibleInput("resolve_conflicts needs a feasible schedule: " +
                          v.message);
  if (s.slots.empty())
    return s;
  const JobSet &sources = g.sources();
  if (sources.size() <= s.machines) {
    for (auto &slot : s.slots)
      slot -= sources;
    s.slots.front() |= sources;
  }
  const std::size_t limit = g.size() * s.slots.size() + 1;
  std::size_t steps = 0;
  while (auto c = find_conflict(g, s)) {
    if (++steps > limit)
      throw std::logic_error("resolve_conflicts failed to terminate");
    resolve_one_conflict(g, s, *c);
  }
  detail::drop_empty_slots(s);
  return s;
}

/// Positions of S_0, S_1, ..., S_l inside a schedule; S_0 is always slot 0.
/// Segment i (sigma_i) is the run of slots strictly between S_i and S_{i+1}
/// (or the end of the schedule for i = l).
struct SeparatorDecomposition {
  std::vector<std::size_t> separator_slots;

  std::size_t length() const {
    return separator_slots.empty() ? 0 : separator_slots.size() - 1;
  }

  JobSet separator(const Schedule &s, std::size_t i) const {
    return s.slots[separator_slots[i]];
  }

  Schedule segment(const Schedule &s, std::size_t i) const {
    Schedule out;
    out.machines = s.machines;
    std::size_t begin = separator_slots[i] + 1;
    std::size_t end = i + 1 < separator_slots.size() ? separator_slots[i + 1]
                                                     : s.slots.size();
    for (std::size_t j = begin; j < end; ++j)
      out.slots.push_back(s.slots[j]);
    return out;
  }
};

inline SeparatorDecomposition extract_separator(const PrecedenceGraph &g,
                                                const Schedule &s) {
  if (auto v = check_feasible(g, s, g.jobs()); !v)
    throw InfeasibleInput("extract_separator needs a feasible schedule: " +
                          v.message);
  if (g.sources().size() > s.machines)
    throw PreconditionViolated("graph has more sources than machines");
  if (find_conflict(g, s))
    throw NotConflictFree("schedule still has a conflict");
  SeparatorDecomposition d;
  if (s.slots.empty())
    return d;
  d.separator_slots.push_back(0);
  const JobSet &sinks = g.sinks();
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < s.slots.size(); ++i)
    if (!(s.slots[i] - sinks).empty())
      last = i;
  if (!last || *last == 0)
    return d;
  for (std::size_t i = 1; i < *last; ++i)
    if ((s.slots[i] - sinks).size() < s.machines)
      d.separator_slots.push_back(i);
  d.separator_slots.push_back(*last);
  return d;
}

struct ProperVerdict {
  bool ok = true;
  std::string failed; ///< "structure", "S0", "A", "B" or "C"
  std::string message;

  explicit operator bool() const { return ok; }
};

/// Checks the proper-separator conditions:
///   (A) V(sigma_i) = succ(S_i) - (succ[S_{i+1}] + sinks)  for i < l
///   (B) S_j within succ(S_i) + sinks                       for i < j
///   (C) V(sigma_l) within sinks
/// plus S_0 = sources.
inline ProperVerdict validate_proper(const PrecedenceGraph &g, const Schedule &s,
                                     const SeparatorDecomposition &d) {
  auto fail = [](std::string which, std::string msg) {
    return ProperVerdict{false, std::move(which), std::move(msg)};
  };
  if (s.slots.empty())
    return d.separator_slots.empty()
               ? ProperVerdict{}
               : fail("structure", "separator on an empty schedule");
  const auto &idx = d.separator_slots;
  if (idx.empty() || idx.front() != 0)
    return fail("structure", "S_0 must be the first slot");
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= s.slots.size())
      return fail("structure", "separator index out of range");
    if (i > 0 && idx[i] <= idx[i - 1])
      return fail("structure", "separator indices must increase");
  }
  if (s.slots[0] != g.sources())
    return fail("S0", "first slot differs from the set of sources");

  const JobSet &sinks = g.sinks();
  const std::size_t l = d.length();
  for (std::size_t i = 0; i < l; ++i) {
    JobSet expected =
        g.succ(d.separator(s, i)) - (g.succ_closed(d.separator(s, i + 1)) | sinks);
    if (d.segment(s, i).jobs() != expected)
      return fail("A", "segment " + std::to_string(i) +
                           " differs from succ(S_i) - (succ[S_i+1] + sinks)");
  }
  for (std::size_t i = 0; i <= l; ++i) {
    JobSet allowed = g.succ(d.separator(s, i)) | sinks;
    for (std::size_t j = i + 1; j <= l; ++j)
      if (!d.separator(s, j).is_subset_of(allowed))
        return fail("B", "S_" + std::to_string(j) + " is not within succ(S_" +
                             std::to_string(i) + ") + sinks");
  }
  if (!d.segment(s, l).jobs().is_subset_of(sinks))
    return fail("C", "last segment contains a non-sink");
  return {};
}

} // namespace usched
