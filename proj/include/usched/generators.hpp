#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "usched/dks.hpp"
#include "usched/error.hpp"
#include "usched/io.hpp"

namespace usched::gen {

/// 1 -> 2 -> ... -> n
inline InstanceText chain(std::size_t n, std::size_t machines) {
  InstanceText t{n, machines, {}, {"chain " + std::to_string(n)}};
  for (std::size_t v = 0; v + 1 < n; ++v)
    t.arcs.emplace_back(v, v + 1);
  return t;
}

/// k disjoint chains of length len; chain c holds jobs c*len .. c*len+len-1.
inline InstanceText chains(std::size_t k, std::size_t len, std::size_t machines) {
  InstanceText t{k * len, machines, {},
                 {"chains " + std::to_string(k) + " " + std::to_string(len)}};
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i + 1 < len; ++i)
      t.arcs.emplace_back(c * len + i, c * len + i + 1);
  return t;
}

/// One root (job 1) preceding k leaves.
inline InstanceText outstar(std::size_t k, std::size_t machines) {
  InstanceText t{k + 1, machines, {}, {"outstar " + std::to_string(k)}};
  for (std::size_t v = 1; v <= k; ++v)
    t.arcs.emplace_back(0, v);
  return t;
}

inline InstanceText antichain(std::size_t n, std::size_t machines) {
  return InstanceText{n, machines, {}, {"antichain " + std::to_string(n)}};
}

/// Arc u -> v for each u < v independently with probability p.
inline InstanceText random(std::size_t n, double p, std::uint64_t seed,
                           std::size_t machines) {
  if (!(p >= 0.0 && p <= 1.0))
    throw BadParams("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  InstanceText t{n, machines, {},
                 {"random " + std::to_string(n) + " p=" + std::to_string(p) +
                  " seed=" + std::to_string(seed)}};
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      // Top 53 bits as a double in [0, 1); identical on every platform.
      const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (x < p)
        t.arcs.emplace_back(u, v);
    }
  return t;
}

/// rows x cols grid oriented down and right; job (i, j) is i*cols + j.
inline InstanceText grid(std::size_t rows, std::size_t cols, std::size_t machines) {
  InstanceText t{rows * cols, machines, {},
                 {"grid " + std::to_string(rows) + " " + std::to_string(cols)}};
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t v = i * cols + j;
      if (i + 1 < rows)
        t.arcs.emplace_back(v, v + cols);
      if (j + 1 < cols)
        t.arcs.emplace_back(v, v + 1);
    }
  return t;
}

/// The reduction instance; the machine count is fixed by the construction.
inline InstanceText dks(const DksInstance &d) {
  const DksReduction r = reduce_dks(d);
  InstanceText t{r.instance.size(), r.machines,
                 dks_arcs(d, r.layer1, r.layer2, r.layer3),
                 {"dks kappa=" + std::to_string(d.kappa) +
                  " ell=" + std::to_string(d.ell) +
                  " delta=" + std::to_string(r.delta)}};
  return t;
}

} // namespace usched::gen
