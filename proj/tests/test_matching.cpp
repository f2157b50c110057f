#include <algorithm>
#include <random>

#include "doctest.h"
#include "ocs/matching.hpp"

using namespace ocs;

namespace {

DemandGraph random_graph(std::mt19937_64& rng, int n, int max_w, double density = 1.0) {
  DemandGraph g(n);
  std::uniform_int_distribution<int> wd(0, max_w);
  std::uniform_real_distribution<double> keep(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (keep(rng) < density) g.set_weight(i, j, wd(rng));
  return g;
}

// Bitmask DP over vertex subsets; independent of both the blossom code and
// the enumeration oracle. Fine up to ~20 nodes.
Bytes dp_max_matching_weight(const DemandGraph& g) {
  const int n = g.nodes();
  std::vector<Bytes> best(std::size_t{1} << n, 0);
  for (std::size_t mask = 1; mask < best.size(); ++mask) {
    int low = std::countr_zero(mask);
    std::size_t rest = mask & ~(std::size_t{1} << low);
    Bytes b = best[rest];
    for (int v = low + 1; v < n; ++v)
      if (rest >> v & 1)
        if (Bytes w = g.weight(RackPair(low, v)); w > 0) b = std::max(b, w + best[rest & ~(std::size_t{1} << v)]);
    best[mask] = b;
  }
  return best.back();
}

// Heaviest-edge-first greedy b-matching.
Bytes greedy_b_matching_weight(const DemandGraph& g, int b) {
  std::vector<std::pair<RackPair, Bytes>> edges(g.edges().begin(), g.edges().end());
  std::stable_sort(edges.begin(), edges.end(), [](auto& x, auto& y) { return x.second > y.second; });
  std::vector<int> deg(static_cast<std::size_t>(g.nodes()), 0);
  Bytes total = 0;
  for (auto& [p, w] : edges)
    if (deg[p.lo] < b && deg[p.hi] < b) {
      ++deg[p.lo];
      ++deg[p.hi];
      total += w;
    }
  return total;
}

bool is_matching(const Matching& m, int n) { return is_b_matching(m.pairs, n, 1); }

}  // namespace

TEST_CASE("mwm_exact on empty and tiny graphs") {
  DemandGraph empty(5);
  auto m = mwm_exact(empty);
  CHECK(m.pairs.empty());
  CHECK(m.weight == 0);

  DemandGraph tri(5);
  tri.set_weight(1, 2, 5);
  tri.set_weight(1, 3, 4);
  tri.set_weight(2, 3, 3);
  auto t = mwm_exact(tri);
  CHECK(t.weight == 5);
  CHECK(t.pairs == std::vector<RackPair>{{1, 2}});
  CHECK(mwm_oracle(tri).pairs == t.pairs);

  tri.set_weight(3, 4, 3);
  auto t4 = mwm_exact(tri);
  CHECK(t4.weight == 8);
  CHECK(t4.pairs == std::vector<RackPair>{{1, 2}, {3, 4}});
  CHECK(mwm_oracle(tri).weight == 8);
}

TEST_CASE("mwm_oracle basics") {
  DemandGraph single(3);
  single.set_weight(1, 2, 7);
  CHECK(mwm_oracle(single).weight == 7);
  CHECK(mwm_oracle(single).pairs == std::vector<RackPair>{{1, 2}});

  DemandGraph path(4);
  path.set_weight(1, 2, 5);
  path.set_weight(2, 3, 5);
  auto m = mwm_oracle(path);
  CHECK(m.weight == 5);
  CHECK(m.pairs.size() == 1);
  CHECK(m.pairs.front() == RackPair{1, 2});  // tie: smaller pair wins

  CHECK_THROWS_AS(mwm_oracle(DemandGraph(13)), std::invalid_argument);
}

TEST_CASE("mwm_exact agrees with the oracle on every 4-node graph with weights 0..3") {
  const RackPair slots[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  int graphs = 0;
  for (int code = 0; code < 4096; ++code) {
    DemandGraph g(4);
    int c = code;
    for (auto p : slots) {
      g.set_weight(p.lo, p.hi, c % 4);
      c /= 4;
    }
    auto a = mwm_exact(g);
    auto b = mwm_oracle(g);
    REQUIRE(a.weight == b.weight);
    REQUIRE(a.pairs == b.pairs);
    ++graphs;
  }
  CHECK(graphs == 4096);
}

TEST_CASE("mwm_exact agrees with the oracle on random graphs up to 12 nodes") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 600; ++iter) {
    int n = 2 + static_cast<int>(rng() % 11);
    int max_w = (iter % 3 == 0) ? 3 : 100;  // small weight ranges force ties
    auto g = random_graph(rng, n, max_w, 0.3 + 0.7 * double(iter % 5) / 4.0);
    auto a = mwm_exact(g);
    auto b = mwm_oracle(g);
    REQUIRE(is_matching(a, n));
    REQUIRE(a.weight == b.weight);
    REQUIRE(a.pairs == b.pairs);
  }
}

TEST_CASE("mwm_exact weight matches subset DP on dense 16-20 node graphs") {
  // Dense graphs with 120+ edges take the non-perturbed 64-bit path.
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 40; ++iter) {
    int n = 14 + static_cast<int>(rng() % 7);
    auto g = random_graph(rng, n, iter % 2 ? 2'500'000 : 9, 0.9);
    auto a = mwm_exact(g);
    REQUIRE(is_matching(a, n));
    REQUIRE(a.weight == dp_max_matching_weight(g));
  }
}

TEST_CASE("iterated_b_matching") {
  SUBCASE("b = 1 is a single maximum-weight matching") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
      auto g = random_graph(rng, 8, 50, 0.6);
      auto bm = iterated_b_matching(g, 1);
      auto m = mwm_exact(g);
      CHECK(bm.pairs == m.pairs);
      CHECK(bm.weight == m.weight);
    }
  }
  SUBCASE("star picks the heaviest remaining spoke each round") {
    DemandGraph star(4);
    star.set_weight(0, 1, 9);
    star.set_weight(0, 2, 8);
    star.set_weight(0, 3, 7);
    auto bm = iterated_b_matching(star, 2);
    CHECK(bm.pairs == std::vector<RackPair>{{0, 1}, {0, 2}});
    CHECK(bm.weight == 17);
  }
  SUBCASE("degree bound, monotonicity, and greedy baseline on random graphs") {
    std::mt19937_64 rng(5);
    double iterated_total = 0, greedy_total = 0;
    for (int iter = 0; iter < 500; ++iter) {
      int n = 3 + static_cast<int>(rng() % 14);
      int b = 1 + iter % 4;
      auto g = random_graph(rng, n, 1000, 0.5);
      auto bm = iterated_b_matching(g, b);
      REQUIRE(is_b_matching(bm.pairs, n, b));
      Bytes w = 0;
      for (auto p : bm.pairs) w += g.weight(p);
      REQUIRE(w == bm.weight);
      REQUIRE(bm.weight >= mwm_exact(g).weight);
      if (b > 1) REQUIRE(bm.weight >= iterated_b_matching(g, b - 1).weight);
      const Bytes greedy = greedy_b_matching_weight(g, b);
      if (b == 1) REQUIRE(bm.weight >= greedy);
      iterated_total += static_cast<double>(bm.weight);
      greedy_total += static_cast<double>(greedy);
    }
    CHECK(iterated_total >= greedy_total);
  }
  SUBCASE("b > 1 can lose to greedy on odd cycles") {
    // Two matchings cannot cover a triangle; greedy takes all three edges.
    DemandGraph tri(3);
    tri.set_weight(0, 1, 3);
    tri.set_weight(0, 2, 1);
    tri.set_weight(1, 2, 4);
    CHECK(iterated_b_matching(tri, 2).weight == 7);
    CHECK(greedy_b_matching_weight(tri, 2) == 8);
  }
  CHECK_THROWS(iterated_b_matching(DemandGraph(3), 0));
}

TEST_CASE("top_m_truncate") {
  SUBCASE("m at least the max degree leaves the graph unchanged") {
    std::mt19937_64 rng(9);
    auto g = random_graph(rng, 7, 20, 1.0);
    CHECK(top_m_truncate(g, 6) == g);
    CHECK(top_m_truncate(g, 100) == g);
  }
  SUBCASE("lightest spoke dropped only when neither endpoint nominates it") {
    DemandGraph g(7);
    for (int j = 1; j <= 6; ++j) g.set_weight(0, j, 7 - j);  // weights 6..1
    // Node 6 only has the spoke, so it nominates it.
    CHECK(top_m_truncate(g, 5).weight({0, 6}) == 1);
    // Give node 6 five heavier edges; now nobody nominates {0,6}.
    for (int j = 1; j <= 5; ++j) g.set_weight(6, j, 10 + j);
    auto t = top_m_truncate(g, 5);
    CHECK(t.weight({0, 6}) == 0);
    CHECK(t.weight({0, 5}) == 2);
    CHECK(t.edge_count() == g.edge_count() - 1);
  }
  SUBCASE("idempotent") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
      auto g = random_graph(rng, 12, 30, 0.8);
      int m = 1 + i % 6;
      auto once = top_m_truncate(g, m);
      CHECK(top_m_truncate(once, m) == once);
    }
  }
  SUBCASE("top-5 keeps at least 95% of the full matching weight on sparse skewed graphs") {
    std::mt19937_64 rng(17);
    std::lognormal_distribution<double> heavy(10.0, 2.0);
    for (int iter = 0; iter < 100; ++iter) {
      const int n = 16;
      DemandGraph g(n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng() % 100 < 35) g.set_weight(i, j, 1 + static_cast<Bytes>(heavy(rng)));
      auto full = iterated_b_matching(g, 1).weight;
      auto trunc = iterated_b_matching(top_m_truncate(g, 5), 1).weight;
      REQUIRE(static_cast<double>(trunc) >= 0.95 * static_cast<double>(full));
    }
  }
}
