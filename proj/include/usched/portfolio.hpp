#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "usched/convolution.hpp"
#include "usched/instance.hpp"
#include "usched/job_set.hpp"
#include "usched/prec_graph.hpp"
#include "usched/schedule.hpp"
#include "usched/subexp.hpp"

namespace usched {

/// Machine fraction above which the subset recursion is the faster branch:
/// 1 - log2(1.9969), rounded up.
inline constexpr double kConvolutionAlpha = 0.002238;

struct PeelResult {
  Instance residual;
  std::size_t rounds = 0;
  /// original[i] is the input ID of residual job i.
  std::vector<JobId> original;
  /// Removed sink layers in input IDs, first removed first.
  std::vector<JobSet> layers;
};

/// Removes all sinks while there are at most m of them; each round costs
/// exactly one slot at the end of an optimal schedule.
inline PeelResult peel_sinks(const Instance &inst) {
  if (inst.machines == 0)
    throw PreconditionViolated("machine count must be at least 1");
  const PrecedenceGraph &g = inst.graph;
  JobSet keep = g.jobs();
  PeelResult out;
  for (;;) {
    if (keep.empty())
      break;
    const JobSet sinks = g.sinks_in(keep);
    if (sinks.size() > inst.machines)
      break;
    out.layers.push_back(sinks);
    keep -= sinks;
    ++out.rounds;
  }
  InducedGraph sub = induced_subgraph(g, keep);
  out.residual = Instance{std::move(sub.graph), inst.machines};
  out.original = std::move(sub.original);
  return out;
}

/// Maps a residual schedule back to input IDs and appends the peeled layers.
inline Schedule unpeel(const PeelResult &p, const Schedule &residual) {
  Schedule s;
  s.machines = p.residual.machines;
  for (const JobSet &slot : residual.slots) {
    JobSet mapped;
    for (JobId v : slot)
      mapped.insert(p.original[v]);
    s.slots.push_back(mapped);
  }
  for (auto it = p.layers.rbegin(); it != p.layers.rend(); ++it)
    s.slots.push_back(*it);
  return s;
}

/// floor(0.15 n), at least 1.
inline std::size_t fractional_lambda(std::size_t n) {
  return std::max<std::size_t>(1, n * 15 / 100);
}

struct CombinedOptions {
  std::optional<std::size_t> lambda; ///< forwarded to the subexp branch
  bool witness = false;
  std::size_t max_conv_width = 24;
};

/// Branch the combined solver takes on a residual instance with n jobs and
/// `sinks` sinks.
inline Algorithm combined_branch(std::size_t n, std::size_t m, std::size_t sinks,
                                 std::size_t max_conv_width = 24) {
  const bool wide = static_cast<double>(m) >= kConvolutionAlpha * static_cast<double>(n);
  if (sinks >= m && wide && n - sinks <= max_conv_width)
    return Algorithm::subset_conv;
  return Algorithm::subexp;
}

inline SolveReport solve_combined(const Instance &inst,
                                  const CombinedOptions &opts = {}) {
  detail::Stopwatch clock;
  PeelResult peeled = peel_sinks(inst);
  const Instance &res = peeled.residual;
  SolveReport inner;
  if (res.size() == 0) {
    inner.makespan = 0;
    if (opts.witness)
      inner.witness = Schedule{{}, inst.machines};
  } else {
    const Algorithm branch =
        combined_branch(res.size(), res.machines, res.graph.sinks().size(),
                        opts.max_conv_width);
    if (branch == Algorithm::subset_conv) {
      SubsetConvOptions o;
      o.max_width = opts.max_conv_width;
      o.witness = opts.witness;
      inner = solve_subset_conv(res, o);
    } else {
      inner = solve_subexp(res, SubexpOptions{opts.lambda, opts.witness});
    }
    inner.dispatched = branch;
  }
  SolveReport report = inner;
  report.algorithm = Algorithm::combined;
  report.peeled_rounds = peeled.rounds;
  report.makespan = inner.makespan + static_cast<int>(peeled.rounds);
  if (opts.witness && inner.witness)
    report.witness = unpeel(peeled, *inner.witness);
  report.wall_ms = clock.elapsed_ms();
  return report;
}

} // namespace usched
