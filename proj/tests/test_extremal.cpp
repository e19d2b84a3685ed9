#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <functional>
#include <random>
#include <vector>

#include "h4/errors.hpp"
#include "h4/extremal.hpp"
#include "h4/hypergraph.hpp"

using namespace h4;

namespace {

Hypergraph4 random_graph(int n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<Edge4> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d)
          if (coin(rng)) edges.push_back(make_edge(a, b, c, d));
  return Hypergraph4::from_edges(n, std::move(edges));
}

// Reference minimum over all balanced bipartitions, written against raw
// subset masks so it shares nothing with the library search.
std::uint64_t brute_min_aabb(const Hypergraph4& h) {
  int n = h.vertex_count();
  int k = (n + 1) / 2;
  std::uint64_t best = ~std::uint64_t(0);
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (std::popcount(m) != k) continue;
    std::uint64_t c = 0;
    for (const auto& e : h.edges()) {
      int t = int((m >> e[0]) & 1) + int((m >> e[1]) & 1) +
              int((m >> e[2]) & 1) + int((m >> e[3]) & 1);
      c += t == 2;
    }
    best = std::min(best, c);
  }
  return best;
}

Err thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Err::parse;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("split graph counts") {
  for (int m = 2; m <= 10; ++m) {
    auto h = build_h0(m, m, false);
    CHECK(h.vertex_count() == 2 * m);
    CHECK(h.edge_count() == 2 * std::uint64_t(m) * choose(m, 3));
  }
  for (int m = 4; m <= 8; ++m)
    CHECK(build_h0(m, m, false).min_codegree() == m - 2);

  CHECK(build_h0(2, 2, false).edge_count() == 0);
  CHECK(build_h0(4, 4, true).edge_count() == 34);  // 32 crossing + both pure

  auto h = build_h0(4, 4, false);
  CHECK(h.has_edge(0, 1, 2, 4));
  CHECK(!h.has_edge(0, 1, 4, 5));
  CHECK(!h.has_edge(4, 5, 6, 7));
  CHECK(build_h0(4, 4, true).has_edge(4, 5, 6, 7));

  auto asym = build_h0(5, 3, false);
  CHECK(asym.edge_count() == 35);  // 5*1 + 10*3
  CHECK(asym.min_codegree() == 1);

  CHECK(thrown_code([] { build_h0(1, 2, false); }) == Err::too_few_vertices);
}

TEST_CASE("split graph with apex vertex") {
  auto h = build_h0_prime(4, 4);
  CHECK(h.vertex_count() == 9);
  CHECK(h.edge_count() == 32 + 56);  // crossing quadruples + all triples over the apex
  CHECK(h.min_codegree() == 3);
  CHECK(h.codegree(0, 1, 8) == 6);
  CHECK(h.codegree(0, 1, 2) == 5);
  CHECK(h.codegree(0, 1, 4) == 3);
}

TEST_CASE("benchmark with one planted seed pair") {
  InstanceRecipe r;
  r.half_size = 20;
  r.medium_seeds = 1;
  auto inst = build_benchmark(r);

  CHECK(inst.graph.vertex_count() == 40);
  CHECK(inst.delta3 == 19);
  CHECK(inst.graph.min_codegree() == 19);
  CHECK(inst.part.a_size() == 20);
  CHECK(inst.aabb == 6859);

  // independent recount straight off the edge list
  std::uint64_t crossing = 0;
  for (const auto& e : inst.graph.edges()) {
    int m = (e[0] < 20) + (e[1] < 20) + (e[2] < 20) + (e[3] < 20);
    if (m == 2) {
      ++crossing;
      bool meets = e[0] == 0 || e[2] == 20;
      CHECK(meets);
    }
  }
  CHECK(crossing == 6859);

  CHECK(inst.planted[0] == PlantedClass::medium);
  CHECK(inst.planted[20] == PlantedClass::medium);
  CHECK(inst.planted[1] == PlantedClass::typical);
  CHECK(inst.planted[19] == PlantedClass::typical);
  CHECK(inst.planted[21] == PlantedClass::typical);
  CHECK(inst.planted[39] == PlantedClass::typical);
}

TEST_CASE("benchmark without the codegree demand") {
  InstanceRecipe r;
  r.half_size = 20;
  r.medium_seeds = 0;
  r.demand_cycle_threshold = false;
  auto inst = build_benchmark(r);
  CHECK(inst.delta3 == 18);
  CHECK(inst.aabb == 0);
}

TEST_CASE("benchmark with an anarchist") {
  InstanceRecipe r;
  r.half_size = 20;
  r.medium_seeds = 2;
  r.anarchists = 1;
  r.include_neutral = false;  // forced back on: anarchists need the pure quadruples
  auto inst = build_benchmark(r);

  CHECK(inst.recipe.include_neutral);
  CHECK(inst.delta3 == 19);
  CHECK(inst.graph.min_codegree() == 19);
  CHECK(inst.planted[0] == PlantedClass::medium);
  CHECK(inst.planted[1] == PlantedClass::medium);
  CHECK(inst.planted[20] == PlantedClass::medium);
  CHECK(inst.planted[21] == PlantedClass::medium);
  CHECK(inst.planted[19] == PlantedClass::anarchist);
  CHECK(inst.planted[2] == PlantedClass::typical);
  CHECK(inst.graph.has_edge(0, 1, 2, 3));
  CHECK(inst.graph.has_edge(36, 37, 38, 39));
  CHECK(inst.aabb > 0);
}

TEST_CASE("odd benchmark meets its demand") {
  InstanceRecipe r;
  r.half_size = 20;
  r.odd_total = true;
  r.medium_seeds = 2;
  auto inst = build_benchmark(r);
  CHECK(inst.graph.vertex_count() == 41);
  CHECK(inst.part.a_size() == 21);
  CHECK(inst.delta3 == 20);
  CHECK(r.demanded_delta3() == 20);
}

TEST_CASE("deletions never break the demanded codegree") {
  InstanceRecipe full;
  full.half_size = 20;
  full.medium_seeds = 1;
  InstanceRecipe thin = full;
  thin.deletion_rate = 0.02;
  thin.rng_seed = 7;

  auto a = build_benchmark(full);
  auto b = build_benchmark(thin);
  CHECK(b.graph.edge_count() < a.graph.edge_count());
  CHECK(b.delta3 == 19);
  CHECK(b.graph.min_codegree() == 19);

  auto b2 = build_benchmark(thin);
  CHECK(b2.graph.edge_count() == b.graph.edge_count());
}

TEST_CASE("recipe envelope") {
  InstanceRecipe r;
  r.half_size = 20;

  r.medium_seeds = 0;
  CHECK(thrown_code([&] { build_benchmark(r); }) == Err::threshold_unreachable);

  r.medium_seeds = 1;
  r.anarchists = 1;  // needs one more seed than anarchists
  CHECK(thrown_code([&] { build_benchmark(r); }) == Err::threshold_unreachable);

  r.anarchists = 0;
  r.odd_total = true;  // odd totals need s+t >= 2
  CHECK(thrown_code([&] { build_benchmark(r); }) == Err::threshold_unreachable);

  InstanceRecipe bad;
  bad.half_size = 5;
  CHECK(thrown_code([&] { bad.validate(); }) == Err::out_of_range);

  bad = InstanceRecipe{};
  bad.half_size = 20;
  bad.medium_seeds = 6;
  CHECK(thrown_code([&] { bad.validate(); }) == Err::out_of_range);

  bad.medium_seeds = 2;
  bad.anarchists = 2;
  CHECK(thrown_code([&] { bad.validate(); }) == Err::out_of_range);

  bad.anarchists = 0;
  bad.deletion_rate = 0.5;
  CHECK(thrown_code([&] { bad.validate(); }) == Err::out_of_range);
}

TEST_CASE("matching fill reaches one below the even split") {
  auto h = build_matching_fill(12, 1);
  CHECK(h.vertex_count() == 24);
  CHECK(h.min_codegree() == 11);

  auto cnt = count_aabb(h, Partition::front_half(24));
  CHECK(cnt >= 600);
  CHECK(cnt <= 792);

  // pair (0,1) keeps its own matching over the far side
  int pair01 = 0;
  for (const auto& e : h.edges())
    if (e[0] == 0 && e[1] == 1 && e[2] >= 12) ++pair01;
  CHECK(pair01 >= 6);

  CHECK(thrown_code([] { build_matching_fill(7, 1); }) == Err::out_of_range);
  CHECK(thrown_code([] { build_matching_fill(2, 1); }) == Err::out_of_range);
}

TEST_CASE("crossing count") {
  CHECK(count_aabb(build_h0(4, 4, false), Partition::front_half(8)) == 0);
  CHECK(count_aabb(random_graph(8, 1.0, 1), Partition::front_half(8)) == 36);
  CHECK(thrown_code([] {
          count_aabb(build_h0(4, 4, false), Partition::front_half(9));
        }) == Err::out_of_range);
}

TEST_CASE("exact split search matches brute force") {
  {
    auto base = build_h0(3, 3, false);
    std::vector<Edge4> edges = base.edges();
    edges.push_back(make_edge(0, 1, 3, 4));
    auto g = Hypergraph4::from_edges(6, std::move(edges));
    auto r = compute_b(g);
    CHECK(r.exact);
    CHECK(r.value == 1);
    CHECK(r.value == brute_min_aabb(g));
    CHECK(count_aabb(g, r.partition) == r.value);
  }
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto g = random_graph(9, 0.3, seed);
    auto r = compute_b(g);
    CHECK(r.exact);
    CHECK(r.value == brute_min_aabb(g));
    CHECK(count_aabb(g, r.partition) == r.value);
  }
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto g = random_graph(12, 0.15, seed);
    auto r = compute_b(g);
    CHECK(r.exact);
    CHECK(r.value == brute_min_aabb(g));
  }
  CHECK(thrown_code([] { compute_b(build_h0(2, 1, false)); }) ==
        Err::too_few_vertices);
}

TEST_CASE("local split search") {
  auto plain = compute_b(build_h0(6, 6, false), 0, 1);
  CHECK(!plain.exact);
  CHECK(plain.value == 0);

  // random relabeling must not hide the split
  std::mt19937_64 rng(3);
  std::vector<int> relab(12);
  std::iota(relab.begin(), relab.end(), 0);
  std::shuffle(relab.begin(), relab.end(), rng);
  auto src = build_h0(6, 6, false);
  std::vector<Edge4> edges;
  for (const auto& e : src.edges())
    edges.push_back(make_edge(relab[e[0]], relab[e[1]], relab[e[2]], relab[e[3]]));
  auto g = Hypergraph4::from_edges(12, std::move(edges));
  auto r = compute_b(g, 0, 1);
  CHECK(!r.exact);
  CHECK(r.value == brute_min_aabb(g));
  CHECK(count_aabb(g, r.partition) == r.value);

  InstanceRecipe rec;
  rec.half_size = 20;
  rec.medium_seeds = 1;
  auto inst = build_benchmark(rec);
  auto big = compute_b(inst.graph, 20, 1);
  CHECK(!big.exact);
  CHECK(big.value <= inst.aabb);
  CHECK(count_aabb(inst.graph, big.partition) == big.value);
}

TEST_CASE("swap gain identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    auto g = random_graph(12, 0.3, 100 + std::uint64_t(trial));
    Partition p = Partition::front_half(12);
    std::uniform_int_distribution<int> pa(0, 5), pb(6, 11);
    int a = pa(rng), b = pb(rng);

    long long ia = 0, ib = 0, t0 = 0, t1 = 0, t2 = 0;
    for (const auto& e : g.edges()) {
      int m = side_mass(p.a(), e);
      bool has_a = e[0] == a || e[1] == a || e[2] == a || e[3] == a;
      bool has_b = e[0] == b || e[1] == b || e[2] == b || e[3] == b;
      if (has_a) {
        int r = m - 1;
        ia += (r == 2) - (r == 1);
      }
      if (has_b) ib += (m == 2) - (m == 1);
      if (has_a && has_b) {
        int r = m - 1;  // the leftover pair's mass
        t2 += r == 2;
        t1 += r == 1;
        t0 += r == 0;
      }
    }
    long long predicted = ia - ib + 2 * t1 - t2 - t0;
    std::uint64_t before = count_aabb(g, p);
    std::uint64_t after = count_aabb(g, p.with_moved(a).with_moved(b));
    CHECK(static_cast<long long>(after) ==
          static_cast<long long>(before) + predicted);
  }
}
