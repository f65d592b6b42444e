#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "usched/error.hpp"
#include "usched/prec_graph.hpp"
#include "usched/schedule.hpp"

namespace usched {

struct Instance {
  PrecedenceGraph graph;
  std::size_t machines = 1;

  std::size_t size() const { return graph.size(); }
};

inline Instance make_instance(std::size_t n, const std::vector<Arc> &arcs,
                              std::size_t machines) {
  if (machines == 0)
    throw PreconditionViolated("machine count must be at least 1");
  return Instance{build_graph(n, arcs), machines};
}

enum class Algorithm { brute, antichain_dp, subexp, subset_conv, combined };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::brute:
    return "brute";
  case Algorithm::antichain_dp:
    return "antichain-dp";
  case Algorithm::subexp:
    return "subexp";
  case Algorithm::subset_conv:
    return "subsetconv";
  case Algorithm::combined:
    return "auto";
  }
  return "?";
}

inline std::ostream &operator<<(std::ostream &os, Algorithm a) {
  return os << to_string(a);
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::brute, Algorithm::antichain_dp,
                      Algorithm::subexp, Algorithm::subset_conv,
                      Algorithm::combined})
    if (to_string(a) == s)
      return a;
  return std::nullopt;
}

/// Instrumentation of the interval-branching solver.
struct BranchStats {
  std::size_t jobs = 0;     ///< n of the original instance
  std::size_t machines = 0; ///< m
  std::size_t lambda = 0;   ///< red threshold on |B|

  std::size_t calls = 0;           ///< nodes of the branching tree
  std::size_t leaf_calls = 0;      ///< memo hits
  std::size_t nonleaf_calls = 0;   ///< computed intervals
  std::size_t red_nonleaves = 0;   ///< non-leaves with |B| <= lambda
  std::size_t empty_intervals = 0; ///< subproblems with no jobs (answered 0)
  std::size_t max_children = 0;    ///< most distinct child calls of a node
  std::size_t max_pairs_consulted = 0;
  std::size_t progress_violations = 0;
  /// Height of every tree of the decomposition (root tree first).
  std::vector<std::size_t> tree_heights;

  std::size_t max_tree_height() const {
    std::size_t h = 0;
    for (auto t : tree_heights)
      h = std::max(h, t);
    return h;
  }
};

struct SolveReport {
  int makespan = 0;
  Algorithm algorithm = Algorithm::combined;
  /// Path actually taken by the combined solver.
  std::optional<Algorithm> dispatched;
  std::size_t peeled_rounds = 0;
  std::optional<Schedule> witness;

  std::size_t memo_hits = 0;
  std::size_t nodes = 0; ///< tree nodes, DP states or layers, per algorithm
  double wall_ms = 0.0;
  std::optional<BranchStats> branch;
};

namespace detail {

class Stopwatch {
public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace detail

/// sum_{i <= k} C(n, i), saturating at UINT64_MAX.
inline std::uint64_t binom_le(std::size_t n, std::size_t k) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (k >= n) {
    if (n >= 64)
      return kMax;
    return std::uint64_t{1} << n;
  }
  std::uint64_t total = 0;
  __extension__ typedef unsigned __int128 wide;
  std::uint64_t term = 1;
  for (std::size_t i = 0; i <= k; ++i) {
    if (i > 0) {
      // term = term * (n - i + 1) / i, exact because C(n,i-1)*(n-i+1) is
      // divisible by i.
      wide t = static_cast<wide>(term) * (n - i + 1);
      t /= i;
      if (t > kMax)
        return kMax;
      term = static_cast<std::uint64_t>(t);
    }
    if (total > kMax - term)
      return kMax;
    total += term;
  }
  return total;
}

} // namespace usched
