#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "usched/error.hpp"
#include "usched/instance.hpp"
#include "usched/job_set.hpp"
#include "usched/prec_graph.hpp"
#include "usched/schedule.hpp"

namespace usched {

/// Boolean function on the subsets of `universe`. Bit b of a table index
/// stands for the b-th smallest member of the universe.
struct SubsetFunction {
  JobSet universe;
  std::vector<std::uint8_t> table;

  SubsetFunction() : table(1, 0) {}
  explicit SubsetFunction(const JobSet &u)
      : universe(u), table(std::size_t{1} << u.size(), 0) {}

  std::size_t bits() const { return universe.size(); }
  bool operator()(std::size_t mask) const { return table[mask] != 0; }
  void set(std::size_t mask, bool value = true) { table[mask] = value; }

  static SubsetFunction indicator_of_empty(const JobSet &u) {
    SubsetFunction f(u);
    f.set(0);
    return f;
  }
};

namespace detail {

template <typename T> void zeta(std::vector<T> &a, std::size_t bits) {
  const std::size_t size = std::size_t{1} << bits;
  for (std::size_t b = 0; b < bits; ++b) {
    const std::size_t step = std::size_t{1} << b;
    for (std::size_t base = 0; base < size; base += 2 * step)
      for (std::size_t x = base; x < base + step; ++x)
        a[x + step] += a[x];
  }
}

template <typename T> void mobius(std::vector<T> &a, std::size_t bits) {
  const std::size_t size = std::size_t{1} << bits;
  for (std::size_t b = 0; b < bits; ++b) {
    const std::size_t step = std::size_t{1} << b;
    for (std::size_t base = 0; base < size; base += 2 * step)
      for (std::size_t x = base; x < base + step; ++x)
        a[x + step] -= a[x];
  }
}

} // namespace detail

/// (f * g)(S) = OR over Z within S of f(Z) AND g(S - Z), by ranked zeta
/// transforms, pointwise products per rank and Moebius inversion.
inline SubsetFunction or_subset_convolve(const SubsetFunction &f,
                                         const SubsetFunction &g) {
  if (f.universe != g.universe || f.table.size() != g.table.size())
    throw UniverseMismatch("subset functions live on different universes");
  const std::size_t bits = f.bits();
  const std::size_t size = f.table.size();
  std::vector<std::vector<std::uint64_t>> fr(bits + 1), gr(bits + 1);
  for (std::size_t r = 0; r <= bits; ++r) {
    fr[r].assign(size, 0);
    gr[r].assign(size, 0);
  }
  for (std::size_t x = 0; x < size; ++x) {
    const auto r = static_cast<std::size_t>(std::popcount(x));
    fr[r][x] = f.table[x];
    gr[r][x] = g.table[x];
  }
  for (std::size_t r = 0; r <= bits; ++r) {
    detail::zeta(fr[r], bits);
    detail::zeta(gr[r], bits);
  }
  SubsetFunction out(f.universe);
  std::vector<std::uint64_t> h(size);
  for (std::size_t r = 0; r <= bits; ++r) {
    std::fill(h.begin(), h.end(), 0);
    for (std::size_t a = 0; a <= r; ++a)
      for (std::size_t x = 0; x < size; ++x)
        h[x] += fr[a][x] * gr[r - a][x];
    detail::mobius(h, bits);
    for (std::size_t x = 0; x < size; ++x)
      if (static_cast<std::size_t>(std::popcount(x)) == r && h[x] != 0)
        out.table[x] = 1;
  }
  return out;
}

/// One (t, i, j) step of the layered recursion, seen through a probe.
/// Tables are indexed in the solver's internal bit order (non-sinks in
/// topological order); `q` is the transform result for this j alone.
struct LayerProbe {
  std::size_t t = 0, i = 0, j = 0;
  std::size_t bits = 0;
  const std::vector<std::uint8_t> *p = nullptr;
  const std::vector<std::uint8_t> *a = nullptr;
  const std::vector<std::uint8_t> *q = nullptr;
};

struct SubsetConvOptions {
  std::size_t max_width = 24; ///< cap on n - |sinks|
  bool witness = false;
  std::function<void(const LayerProbe &)> probe;
  /// Called with best[t] for t = 0, 1, ... as each layer completes.
  std::function<void(std::size_t, const std::vector<std::int16_t> &)> layer;
};

namespace detail {

/// Tables shared by every layer of the recursion over the non-sinks.
struct SubsetConvTables {
  std::vector<JobId> order;  ///< bit -> job, topological
  std::vector<JobId> sinks;
  std::vector<std::uint8_t> ideal;
  std::vector<std::uint8_t> antichain;
  std::vector<std::uint16_t> sinkcount;
  std::vector<std::uint32_t> sink_need; ///< per sink, predecessor mask
};

inline SubsetConvTables build_tables(const PrecedenceGraph &g) {
  SubsetConvTables t;
  const JobSet sinks = g.sinks();
  for (JobId v : g.topological_order())
    if (!sinks.contains(v))
      t.order.push_back(v);
  t.sinks = sinks.to_vector();
  const std::size_t k = t.order.size();
  const std::size_t size = std::size_t{1} << k;
  std::vector<std::uint32_t> need(k, 0), comparable(k, 0);
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t c = 0; c < k; ++c) {
      if (g.precedes(t.order[c], t.order[b]))
        need[b] |= std::uint32_t{1} << c;
      if (g.comparable(t.order[c], t.order[b]))
        comparable[b] |= std::uint32_t{1} << c;
    }

  // The highest bit of a mask is maximal in it, so ideals grow one top
  // element at a time.
  t.ideal.assign(size, 0);
  t.antichain.assign(size, 0);
  t.ideal[0] = 1;
  t.antichain[0] = 1;
  for (std::size_t x = 1; x < size; ++x) {
    const std::size_t top = std::bit_width(x) - 1;
    const std::size_t rest = x ^ (std::size_t{1} << top);
    t.ideal[x] = t.ideal[rest] && (need[top] & ~x) == 0;
    t.antichain[x] = t.antichain[rest] && (comparable[top] & x) == 0;
  }

  std::vector<std::uint32_t> count(size, 0);
  for (JobId s : t.sinks) {
    std::uint32_t mask = 0;
    for (std::size_t b = 0; b < k; ++b)
      if (g.precedes(t.order[b], s))
        mask |= std::uint32_t{1} << b;
    t.sink_need.push_back(mask);
    ++count[mask];
  }
  zeta(count, k);
  t.sinkcount.assign(size, 0);
  for (std::size_t x = 0; x < size; ++x)
    t.sinkcount[x] = static_cast<std::uint16_t>(count[x]);
  return t;
}

template <typename Fn>
void for_each_antichain_mask(std::uint32_t pool,
                             const std::vector<std::uint8_t> &antichain,
                             std::size_t room, std::uint32_t current, Fn &fn) {
  fn(current);
  if (room == 0)
    return;
  while (pool != 0) {
    const std::uint32_t bit = pool & (~pool + 1);
    pool ^= bit;
    if (antichain[current | bit])
      for_each_antichain_mask(pool, antichain, room - 1, current | bit, fn);
  }
}

} // namespace detail

/// Optimal makespan by the layered subset recursion over the non-sinks:
/// best[t][X] is the largest number of sinks that can finish together with
/// exactly the non-sinks X within t slots (-1 if X cannot).
inline SolveReport solve_subset_conv(const Instance &inst,
                                     const SubsetConvOptions &opts = {}) {
  detail::Stopwatch clock;
  const PrecedenceGraph &g = inst.graph;
  const std::size_t m = inst.machines;
  if (m == 0)
    throw PreconditionViolated("machine count must be at least 1");
  const std::size_t n = g.size();
  const std::size_t width = n - g.sinks().size();
  if (width > opts.max_width || width > 30)
    throw InstanceTooLarge(std::to_string(width) +
                           " non-sink jobs exceed the table width cap of " +
                           std::to_string(std::min<std::size_t>(opts.max_width, 30)));
  SolveReport report;
  report.algorithm = Algorithm::subset_conv;
  if (n == 0) {
    if (opts.witness)
      report.witness = Schedule{{}, m};
    report.wall_ms = clock.elapsed_ms();
    return report;
  }

  const detail::SubsetConvTables tab = detail::build_tables(g);
  const std::size_t k = tab.order.size();
  const std::size_t size = std::size_t{1} << k;
  const std::size_t full = size - 1;
  const auto total = static_cast<int>(tab.sinks.size());
  const std::size_t jmax = std::min<std::size_t>(m, tab.sinks.size());

  // zeta of a_j(Y) = [Y antichain, |Y| <= m - j]
  std::vector<std::vector<std::uint32_t>> zeta_a(jmax + 1);
  std::vector<std::vector<std::uint8_t>> a_tables;
  for (std::size_t j = 0; j <= jmax; ++j) {
    auto &z = zeta_a[j];
    z.assign(size, 0);
    for (std::size_t y = 0; y < size; ++y)
      z[y] = tab.antichain[y] &&
             static_cast<std::size_t>(std::popcount(y)) <= m - j;
    if (opts.probe)
      a_tables.emplace_back(z.begin(), z.end());
    detail::zeta(z, k);
  }

  std::vector<std::int16_t> prev(size, -1), cur(size, -1);
  prev[0] = 0;
  if (opts.layer)
    opts.layer(0, prev);
  std::vector<std::vector<std::int16_t>> layers;
  if (opts.witness)
    layers.push_back(prev);
  std::vector<std::uint64_t> acc(size), tmp(size);
  std::vector<std::uint8_t> p_table, q_table;

  std::size_t makespan = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    std::fill(cur.begin(), cur.end(), -1);
    for (int i = 0; i <= total; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      bool any_p = false;
      for (std::size_t j = 0; j <= std::min<std::size_t>(jmax, i); ++j) {
        const int floor_i = i - static_cast<int>(j);
        bool nonzero = false;
        for (std::size_t z = 0; z < size; ++z) {
          const bool p = prev[z] >= floor_i && tab.sinkcount[z] >= i;
          tmp[z] = p;
          nonzero |= p;
        }
        if (opts.probe) {
          p_table.assign(tmp.begin(), tmp.end());
          std::vector<std::uint64_t> single = tmp;
          detail::zeta(single, k);
          for (std::size_t x = 0; x < size; ++x)
            single[x] *= zeta_a[j][x];
          detail::mobius(single, k);
          q_table.assign(size, 0);
          for (std::size_t x = 0; x < size; ++x)
            q_table[x] = single[x] != 0;
          opts.probe(LayerProbe{t, static_cast<std::size_t>(i), j, k, &p_table,
                                &a_tables[j], &q_table});
        }
        if (!nonzero)
          continue;
        any_p = true;
        detail::zeta(tmp, k);
        for (std::size_t x = 0; x < size; ++x)
          acc[x] += tmp[x] * zeta_a[j][x];
      }
      if (!any_p)
        break;
      detail::mobius(acc, k);
      bool grew = false;
      for (std::size_t x = 0; x < size; ++x)
        if (acc[x] != 0 && tab.ideal[x]) {
          cur[x] = static_cast<std::int16_t>(i);
          grew = true;
        }
      if (!grew)
        break;
    }
    ++report.nodes;
    if (opts.layer)
      opts.layer(t, cur);
    if (opts.witness)
      layers.push_back(cur);
    if (cur[full] >= total) {
      makespan = t;
      break;
    }
    std::swap(prev, cur);
  }
  if (makespan == 0)
    throw std::logic_error("subset recursion found no schedule");
  report.makespan = static_cast<int>(makespan);

  if (opts.witness) {
    // Walk back: at layer t pick an antichain Y of the current set and a
    // sink count j consistent with layer t-1.
    std::vector<std::uint32_t> slot_masks(makespan);
    std::vector<int> slot_sinks(makespan);
    std::uint32_t x = static_cast<std::uint32_t>(full);
    int i = total;
    for (std::size_t t = makespan; t >= 1; --t) {
      const auto &before = layers[t - 1];
      bool found = false;
      auto try_y = [&](std::uint32_t y) {
        if (found)
          return;
        const std::uint32_t z = x & ~y;
        if (!tab.ideal[z] || tab.sinkcount[z] < i || before[z] < 0)
          return;
        const int j = std::max(0, i - before[z]);
        if (static_cast<std::size_t>(j) + std::popcount(y) > m)
          return;
        slot_masks[t - 1] = y;
        slot_sinks[t - 1] = j;
        x = z;
        i -= j;
        found = true;
      };
      detail::for_each_antichain_mask(x, tab.antichain, m, 0, try_y);
      if (!found)
        throw WitnessUnavailable("subset recursion backtrack failed");
    }
    Schedule s;
    s.machines = m;
    std::uint32_t done = 0;
    std::vector<char> used(tab.sinks.size(), 0);
    for (std::size_t t = 0; t < makespan; ++t) {
      JobSet slot;
      for (std::size_t b = 0; b < k; ++b)
        if (slot_masks[t] >> b & 1)
          slot.insert(tab.order[b]);
      int need = slot_sinks[t];
      for (std::size_t s_idx = 0; s_idx < tab.sinks.size() && need > 0; ++s_idx)
        if (!used[s_idx] && (tab.sink_need[s_idx] & ~done) == 0) {
          used[s_idx] = 1;
          slot.insert(tab.sinks[s_idx]);
          --need;
        }
      if (need > 0)
        throw WitnessUnavailable("not enough ready sinks while expanding");
      done |= slot_masks[t];
      s.slots.push_back(slot);
    }
    report.witness = std::move(s);
  }
  report.wall_ms = clock.elapsed_ms();
  return report;
}

} // namespace usched
