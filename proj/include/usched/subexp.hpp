#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "usched/error.hpp"
#include "usched/instance.hpp"
#include "usched/job_set.hpp"
#include "usched/prec_graph.hpp"
#include "usched/reconstruct.hpp"
#include "usched/schedule.hpp"

namespace usched {

/// Solved intervals keyed by A* + B, where A* is the part of A below B.
/// B is recovered as the members with a predecessor inside the key.
class MemoTable {
public:
  const ReconstructResult *find(const JobSet &key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }
  void publish(const JobSet &key, ReconstructResult r) {
    entries_.emplace(key, std::move(r));
  }
  std::size_t size() const { return entries_.size(); }
  void clear() { entries_.clear(); }

  static JobSet split_sink(const PrecedenceGraph &g, const JobSet &key) {
    JobSet b;
    for (JobId v : key)
      if (g.pred(v).intersects(key))
        b.insert(v);
    return b;
  }

private:
  std::unordered_map<JobSet, ReconstructResult, JobSetHash> entries_;
};

/// Interval-branching solver over a graph that already carries a
/// super-source. One instance owns the memo and the instrumentation.
class IntervalSolver {
public:
  IntervalSolver(const PrecedenceGraph &g, std::size_t m, std::size_t lambda)
      : g_(g), m_(m) {
    if (m == 0)
      throw PreconditionViolated("machine count must be at least 1");
    stats_.machines = m;
    stats_.lambda = lambda;
    stats_.jobs = g.size() == 0 ? 0 : g.size() - 1;
  }

  /// Makespan of an optimal schedule of succ(A) & pred[B].
  int schedule(const JobSet &a, const JobSet &b) {
    check_endpoints(a, b);
    if (stats_.tree_heights.empty())
      stats_.tree_heights.push_back(0);
    return visit(a & g_.pred_closed(b), b, 0, 0);
  }

  /// Optimal schedule of succ(A) & pred[B]; solves the interval if needed.
  Schedule witness(const JobSet &a, const JobSet &b) {
    const JobSet lower = a & g_.pred_closed(b);
    if ((g_.succ(lower) & g_.pred_closed(b)).empty())
      return Schedule{{}, m_};
    if (!memo_.find(lower | b))
      schedule(a, b);
    return expand(lower, b);
  }

  const BranchStats &stats() const { return stats_; }
  const MemoTable &memo() const { return memo_; }
  MemoTable &memo() { return memo_; }

private:
  void check_endpoints(const JobSet &a, const JobSet &b) const {
    if (!is_antichain(g_, a) || !is_antichain(g_, b))
      throw PreconditionViolated("interval endpoints must be antichains");
    if (!b.is_subset_of(g_.succ(a)))
      throw PreconditionViolated("B must lie inside succ(A)");
  }

  struct Child {
    JobSet lower;
    JobSet sinks;
  };

  /// The subproblem strictly between slot Y and slot X inside an interval:
  /// succ(Y) - (succ[X] + B), restricted to the interval's jobs.
  std::optional<Child> child(const JobSet &jobs, const JobSet &b,
                             const JobSet &y, const JobSet &x) const {
    const JobSet inner = (jobs & g_.succ(y)) - (g_.succ_closed(x) | b);
    if (inner.empty())
      return std::nullopt;
    const JobSet sinks = g_.sinks_in(inner);
    return Child{y & g_.pred_closed(sinks), sinks};
  }

  /// Every (Y, X) pair the reconstruction of this interval may consult.
  template <typename Fn>
  void for_each_pair(const JobSet &lower, const JobSet &inner, Fn &&fn) const {
    const auto visit_y = [&](const JobSet &y) {
      for_each_antichain(g_, inner & g_.succ(y), m_,
                         [&](const JobSet &x) { fn(y, x); });
    };
    visit_y(lower);
    for_each_antichain(g_, inner, m_, [&](const JobSet &y) {
      if (y != lower)
        visit_y(y);
    });
  }

  int visit(const JobSet &lower, const JobSet &b, std::size_t depth,
            std::size_t tree) {
    ++stats_.calls;
    auto &height = stats_.tree_heights[tree];
    height = std::max(height, depth);
    const JobSet key = lower | b;
    if (const ReconstructResult *hit = memo_.find(key)) {
      ++stats_.leaf_calls;
      return hit->makespan - 1;
    }
    const JobSet jobs = g_.succ(lower) & g_.pred_closed(b);
    if (jobs.empty()) {
      ++stats_.empty_intervals;
      ++stats_.leaf_calls;
      return 0;
    }
    ++stats_.nonleaf_calls;
    if (b.size() <= stats_.lambda) {
      ++stats_.red_nonleaves;
      if (depth > 0) {
        tree = stats_.tree_heights.size();
        stats_.tree_heights.push_back(0);
        depth = 0;
      }
    }

    const JobSet inner = jobs - b;
    SubscheduleTable table;
    std::unordered_set<JobSet, JobSetHash> children;
    std::vector<std::pair<SlotPair, Child>> pending;
    for_each_pair(lower, inner, [&](const JobSet &y, const JobSet &x) {
      auto c = child(jobs, b, y, x);
      if (!c) {
        table.set(y, x, 0);
        return;
      }
      pending.push_back({SlotPair{y, x}, *c});
    });
    for (const auto &[pair, c] : pending) {
      const JobSet child_jobs = g_.succ(c.lower) & g_.pred_closed(c.sinks);
      if (child_jobs.intersects(b) || !child_jobs.is_subset_of(jobs) ||
          child_jobs.size() + b.size() > jobs.size())
        ++stats_.progress_violations;
      children.insert(c.lower | c.sinks);
      table.set(pair.earlier, pair.later, visit(c.lower, c.sinks, depth + 1, tree));
    }
    stats_.max_children = std::max(stats_.max_children, children.size());

    ReconstructResult r = reconstruct(g_, m_, table, lower | jobs);
    stats_.max_pairs_consulted =
        std::max(stats_.max_pairs_consulted, r.pairs_consulted);
    const int value = r.makespan - 1;
    memo_.publish(key, std::move(r));
    return value;
  }

  Schedule expand(const JobSet &lower, const JobSet &b) {
    const JobSet jobs = g_.succ(lower) & g_.pred_closed(b);
    if (jobs.empty())
      return Schedule{{}, m_};
    const ReconstructResult *r = memo_.find(lower | b);
    if (!r)
      throw WitnessUnavailable("interval was never solved");
    const JobSet scope = lower | jobs;
    Schedule s = expand_witness(
        g_, m_, *r, scope, [&](const JobSet &y, const JobSet &x) -> Schedule {
          auto c = child(jobs, b, y, x);
          if (!c)
            return Schedule{{}, m_};
          return expand(c->lower, c->sinks);
        });
    s.slots.erase(s.slots.begin());
    return s;
  }

  const PrecedenceGraph &g_;
  std::size_t m_;
  MemoTable memo_;
  BranchStats stats_;
};

/// One call of the interval recursion on the solver's graph.
inline int schedule_interval(IntervalSolver &solver, const JobSet &a,
                             const JobSet &b) {
  return solver.schedule(a, b);
}

inline std::size_t default_lambda(std::size_t n, std::size_t m) {
  return static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(n) * static_cast<double>(m))));
}

struct SubexpOptions {
  std::optional<std::size_t> lambda;
  bool witness = false;
};

inline SolveReport solve_subexp(const Instance &inst,
                                const SubexpOptions &opts = {}) {
  detail::Stopwatch clock;
  const std::size_t n = inst.size();
  const std::size_t m = inst.machines;
  if (m == 0)
    throw PreconditionViolated("machine count must be at least 1");
  if (opts.lambda && *opts.lambda == 0)
    throw BadParams("lambda must be at least 1");
  SolveReport report;
  report.algorithm = Algorithm::subexp;
  const std::size_t lambda = opts.lambda.value_or(default_lambda(n, m));
  if (n == 0) {
    BranchStats empty;
    empty.machines = m;
    empty.lambda = lambda;
    report.branch = empty;
    if (opts.witness)
      report.witness = Schedule{{}, m};
    report.wall_ms = clock.elapsed_ms();
    return report;
  }

  const PrecedenceGraph g_plus = with_super_source(inst.graph);
  const JobSet root = JobSet::single(n);
  IntervalSolver solver(g_plus, m, lambda);
  report.makespan = solver.schedule(root, inst.graph.sinks());
  if (opts.witness)
    report.witness = solver.witness(root, inst.graph.sinks());
  report.branch = solver.stats();
  report.memo_hits = solver.stats().leaf_calls - solver.stats().empty_intervals;
  report.nodes = solver.stats().calls;
  report.wall_ms = clock.elapsed_ms();
  return report;
}

inline SolveReport solve_subexp(const Instance &inst,
                                std::optional<std::size_t> lambda) {
  return solve_subexp(inst, SubexpOptions{lambda, false});
}

struct TreeBoundsVerdict {
  bool ok = true;
  std::uint64_t red_nonleaves = 0;
  std::uint64_t red_bound = 0;
  std::uint64_t max_height = 0;
  std::uint64_t height_bound = 0;
  std::uint64_t max_children = 0;
  std::uint64_t children_bound = 0;
  std::uint64_t progress_violations = 0;

  explicit operator bool() const { return ok; }
};

/// Compares measured branching-tree shape with its analytic limits:
/// red non-leaves, height of every tree between red nodes, children per node.
inline TreeBoundsVerdict report_tree_bounds(const BranchStats &s) {
  TreeBoundsVerdict v;
  const std::uint64_t sat = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t red = binom_le(s.jobs, s.machines + s.lambda);
  v.red_nonleaves = s.red_nonleaves;
  v.red_bound = red == sat ? sat : red + 1;
  v.max_height = s.max_tree_height();
  v.height_bound = s.lambda == 0 ? s.jobs + 1 : s.jobs / s.lambda + 1;
  v.max_children = s.max_children;
  v.children_bound = binom_le(s.jobs, 2 * s.machines);
  v.progress_violations = s.progress_violations;
  v.ok = v.red_nonleaves <= v.red_bound && v.max_height <= v.height_bound &&
         v.max_children <= v.children_bound && v.progress_violations == 0;
  return v;
}

} // namespace usched
