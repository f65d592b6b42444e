#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "usched/usched.hpp"

using namespace usched;

namespace {

DksInstance triangle(std::size_t kappa, std::size_t ell) {
  return DksInstance{3, {{0, 1}, {1, 2}, {0, 2}}, kappa, ell};
}

DksInstance path2(std::size_t kappa, std::size_t ell) {
  return DksInstance{2, {{0, 1}}, kappa, ell};
}

// Random graph without isolated vertices: a random spanning forest of stars
// plus extra edges.
DksInstance random_dks(std::mt19937_64 &rng, std::size_t max_vertices,
                       double extra) {
  DksInstance d;
  d.vertices = 2 + rng() % (max_vertices - 1);
  std::vector<std::vector<bool>> adj(d.vertices, std::vector<bool>(d.vertices));
  auto add = [&](std::size_t u, std::size_t v) {
    if (u == v || adj[u][v])
      return;
    adj[u][v] = adj[v][u] = true;
    d.edges.emplace_back(u, v);
  };
  for (std::size_t v = 1; v < d.vertices; ++v)
    if (d.degrees()[v] == 0)
      add(v, rng() % v);
  if (d.degrees()[0] == 0)
    add(0, 1);
  for (std::size_t u = 0; u < d.vertices; ++u)
    for (std::size_t v = u + 1; v < d.vertices; ++v)
      if (static_cast<double>(rng() % 1000) / 1000.0 < extra)
        add(u, v);
  d.kappa = 1 + rng() % d.vertices;
  d.ell = rng() % (d.kappa * (d.kappa - 1) / 2 + 2);
  return d;
}

} // namespace

TEST(ReduceDks, TriangleLayout) {
  auto r = reduce_dks(triangle(3, 3));
  EXPECT_EQ(r.delta, 2u);
  EXPECT_EQ(r.machines, 13u);
  EXPECT_EQ(r.layer1, 10u);
  EXPECT_EQ(r.layer2, 10u);
  EXPECT_EQ(r.layer3, 13u);
  EXPECT_EQ(r.instance.size(), 39u);
  EXPECT_EQ(r.instance.machines, 13u);
  EXPECT_EQ(r.first_layer_job(1), 6u);
  EXPECT_EQ(r.first_layer_job(2), 16u);
  EXPECT_EQ(r.first_layer_job(3), 26u);
}

TEST(ReduceDks, PathLayout) {
  auto r = reduce_dks(path2(2, 1));
  EXPECT_EQ(r.machines, 5u);
  EXPECT_EQ(r.layer1, 3u);
  EXPECT_EQ(r.layer2, 4u);
  EXPECT_EQ(r.layer3, 5u);
  EXPECT_EQ(r.instance.size(), 15u);
}

TEST(ReduceDks, JobCountIsThreeTimesTheMachines) {
  std::mt19937_64 rng(61);
  int built = 0;
  for (int it = 0; it < 200; ++it) {
    auto d = random_dks(rng, 8, 0.3);
    try {
      auto r = reduce_dks(d);
      EXPECT_EQ(r.instance.size(), 3 * r.machines);
      EXPECT_EQ(r.delta, d.max_degree());
      EXPECT_EQ(r.machines, 2 * r.delta * d.vertices + 1);
      ++built;
    } catch (const NegativeLayer &) {
    } catch (const InstanceTooLarge &) {
    }
  }
  EXPECT_GT(built, 100);
}

TEST(ReduceDks, NegativeLayerIsRejected) {
  EXPECT_THROW(reduce_dks(path2(2, 6)), NegativeLayer);
  EXPECT_NO_THROW(reduce_dks(path2(2, 5)));
}

TEST(ReduceDks, InvalidGraphsAreRejected) {
  EXPECT_THROW(reduce_dks(DksInstance{3, {{0, 1}}, 2, 1}), PreconditionViolated);
  EXPECT_THROW(reduce_dks(DksInstance{2, {{0, 0}}, 1, 0}), PreconditionViolated);
  EXPECT_THROW(reduce_dks(DksInstance{2, {{0, 1}, {1, 0}}, 1, 0}),
               PreconditionViolated);
  EXPECT_THROW(reduce_dks(DksInstance{2, {{0, 2}}, 1, 0}), PreconditionViolated);
  EXPECT_THROW(reduce_dks(path2(3, 0)), PreconditionViolated);
}

TEST(ReduceDks, StructureOfTheClosedGraph) {
  auto d = triangle(2, 1);
  auto r = reduce_dks(d);
  const auto &g = r.instance.graph;
  const std::size_t l1 = r.first_layer_job(1), l2 = r.first_layer_job(2),
                    l3 = r.first_layer_job(3);
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const JobId job = d.vertices + e;
    EXPECT_EQ(g.pred(job), (JobSet{d.edges[e].first, d.edges[e].second}));
    EXPECT_TRUE(g.succ(job).empty());
  }
  for (JobId v = 0; v < d.vertices; ++v) {
    EXPECT_TRUE(g.pred(v).empty());
    EXPECT_EQ(g.succ(v).size(), d.degrees()[v]);
  }
  for (std::size_t a = l1; a < l2; ++a)
    for (std::size_t b = l2; b < l3; ++b)
      for (std::size_t c = l3; c < g.size(); ++c) {
        ASSERT_TRUE(g.precedes(a, b));
        ASSERT_TRUE(g.precedes(b, c));
        ASSERT_TRUE(g.precedes(a, c));
      }
  EXPECT_EQ(g.height(), 3u);
  EXPECT_FALSE(g.comparable_to(0).intersects(JobSet::prefix(g.size()) -
                                             JobSet::prefix(l1)));
}

TEST(ReduceDks, GeneratorEmitsTheSameInstance) {
  auto d = triangle(3, 2);
  auto r = reduce_dks(d);
  auto text = gen::dks(d);
  EXPECT_EQ(text.machines, r.machines);
  auto inst = text.to_instance();
  EXPECT_EQ(inst.size(), r.instance.size());
  EXPECT_EQ(closure_arcs(inst.graph), closure_arcs(r.instance.graph));
}

TEST(DenKappa, Triangle) {
  EXPECT_EQ(den_kappa_oracle(triangle(3, 0)), 3u);
  EXPECT_EQ(den_kappa_oracle(triangle(2, 0)), 1u);
  EXPECT_EQ(den_kappa_oracle(triangle(1, 0)), 0u);
  EXPECT_EQ(den_kappa_oracle(triangle(0, 0)), 0u);
}

TEST(DenKappa, MatchesRecursiveEnumeration) {
  std::mt19937_64 rng(62);
  for (int it = 0; it < 200; ++it) {
    auto d = random_dks(rng, 8, 0.4);
    EXPECT_EQ(den_kappa_oracle(d), oracle::densest(d.vertices, d.edges, d.kappa));
  }
}

TEST(DenKappa, SizeGuard) {
  DksInstance big;
  big.vertices = 17;
  for (std::size_t v = 0; v + 1 < 17; ++v)
    big.edges.emplace_back(v, v + 1);
  big.kappa = 2;
  EXPECT_THROW(den_kappa_oracle(big), InstanceTooLarge);
  EXPECT_EQ(den_kappa_oracle(big, 20), 1u);
}

TEST(ReduceDks, MakespanThreeExactlyWhenDenseEnough) {
  std::mt19937_64 rng(63);
  int yes = 0, no = 0;
  for (int it = 0; it < 400 && (yes < 15 || no < 15); ++it) {
    auto d = random_dks(rng, 6, 0.35);
    DksReduction r;
    try {
      r = reduce_dks(d);
    } catch (const NegativeLayer &) {
      continue;
    }
    if (r.instance.size() > 150)
      continue;
    const bool dense = den_kappa_oracle(d) >= d.ell;
    const int makespan = solve_antichain_dp(r.instance).makespan;
    EXPECT_GE(makespan, 3);
    EXPECT_EQ(makespan == 3, dense)
        << "N=" << d.vertices << " M=" << d.edges.size() << " kappa=" << d.kappa
        << " ell=" << d.ell << " makespan=" << makespan;
    (dense ? yes : no) += 1;
  }
  EXPECT_GE(yes, 15);
  EXPECT_GE(no, 15);
}

TEST(ReduceDks, SmallCasesAcrossSolvers) {
  for (auto d : {path2(2, 1), path2(2, 0), path2(1, 1), triangle(2, 2)}) {
    auto r = reduce_dks(d);
    const int dp = solve_antichain_dp(r.instance).makespan;
    EXPECT_EQ(dp == 3, den_kappa_oracle(d) >= d.ell);
    if (r.instance.size() <= 24) {
      EXPECT_EQ(solve_subexp(r.instance).makespan, dp);
    }
  }
}
