#include "h4/extremal.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <sstream>

namespace h4 {

namespace {

struct TripleRanker {
  explicit TripleRanker(int n) : n(n) {}
  std::size_t rank(int i, int j, int k) const {
    return std::size_t(choose(std::uint64_t(k), 3) +
                       choose(std::uint64_t(j), 2) + std::uint64_t(i));
  }
  std::size_t count() const { return std::size_t(choose(std::uint64_t(n), 3)); }
  int n;
};

void bump_codegrees(const TripleRanker& tr, std::vector<std::uint32_t>& cod,
                    const Edge4& e, int d) {
  for (int t = 0; t < 4; ++t) {
    int tri[3];
    int m = 0;
    for (int u = 0; u < 4; ++u)
      if (u != t) tri[m++] = e[u];
    cod[tr.rank(tri[0], tri[1], tri[2])] += std::uint32_t(d);
  }
}

}  // namespace

Hypergraph4 build_h0(int a_size, int b_size, bool include_neutral) {
  if (a_size < 0 || b_size < 0 || a_size + b_size < 4)
    fail(Err::too_few_vertices, "split construction needs at least 4 vertices");
  const int n = a_size + b_size;
  std::vector<Edge4> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          int mass = (i < a_size) + (j < a_size) + (k < a_size) + (l < a_size);
          bool keep = mass == 1 || mass == 3 ||
                      (include_neutral && (mass == 0 || mass == 4));
          if (keep)
            edges.push_back(Edge4{std::uint16_t(i), std::uint16_t(j),
                                  std::uint16_t(k), std::uint16_t(l)});
        }
  return Hypergraph4::from_edges(n, std::move(edges));
}

Hypergraph4 build_h0_prime(int a_size, int b_size) {
  if (a_size < 0 || b_size < 0 || a_size + b_size < 4)
    fail(Err::too_few_vertices, "split construction needs at least 4 vertices");
  const int n = a_size + b_size;
  auto base = build_h0(a_size, b_size, false);
  std::vector<Edge4> edges = base.edges();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        edges.push_back(Edge4{std::uint16_t(i), std::uint16_t(j),
                              std::uint16_t(k), std::uint16_t(n)});
  return Hypergraph4::from_edges(n + 1, std::move(edges));
}

void InstanceRecipe::validate() const {
  if (half_size < 6)
    fail(Err::out_of_range, "half_size must be at least 6");
  if (medium_seeds < 0 || anarchists < 0)
    fail(Err::out_of_range, "negative plant count");
  if (medium_seeds > half_size / 4)
    fail(Err::out_of_range, "medium_seeds exceeds half_size/4");
  if (anarchists > half_size / 20)
    fail(Err::out_of_range, "anarchists exceed the half_size/20 budget");
  if (!(deletion_rate >= 0.0 && deletion_rate <= 0.2))
    fail(Err::out_of_range, "deletion_rate must lie in [0, 0.2]");
  if (demand_cycle_threshold) {
    // S-avoiding cross triples have codegree n-2+s-t on the short side, so
    // the codegree demand pins the plant envelope.
    bool ok = medium_seeds >= anarchists + 1 &&
              (!odd_total || medium_seeds + anarchists >= 2);
    if (!ok)
      fail(Err::threshold_unreachable,
           "recipe cannot reach the demanded codegree: needs s >= t+1" +
               std::string(odd_total ? " and s+t >= 2" : ""));
  }
}

std::vector<std::string> InstanceRecipe::comment_block() const {
  std::ostringstream del;
  del << deletion_rate;
  return {
      "recipe",
      "n=" + std::to_string(half_size),
      "odd=" + std::to_string(odd_total ? 1 : 0),
      "neutral=" + std::to_string(include_neutral ? 1 : 0),
      "s=" + std::to_string(medium_seeds),
      "t=" + std::to_string(anarchists),
      "del=" + del.str(),
      "demand=" + std::to_string(demand_cycle_threshold ? 1 : 0),
      "seed=" + std::to_string(rng_seed),
  };
}

BenchmarkInstance build_benchmark(const InstanceRecipe& recipe) {
  InstanceRecipe r = recipe;
  r.validate();
  const int N = r.total_vertices();
  const int a_nom = (N + 1) / 2;
  const int s = r.medium_seeds, t = r.anarchists;
  // Without the neutral quadruples an all-B_eff triple sees only |A_eff|
  // neighbors, which anarchist planting pushes below the demand.
  if (t >= 1) r.include_neutral = true;

  std::vector<char> eff_a(std::size_t(N), 0), in_s(std::size_t(N), 0);
  std::vector<char> in_sb(std::size_t(N), 0), anarch(std::size_t(N), 0);
  for (int v = 0; v < a_nom - t; ++v) eff_a[std::size_t(v)] = 1;
  for (int v = 0; v < s; ++v) in_s[std::size_t(v)] = 1;
  for (int v = a_nom; v < a_nom + s; ++v) in_s[std::size_t(v)] = 1;
  for (int v = a_nom; v < a_nom + s; ++v) in_sb[std::size_t(v)] = 1;
  for (int v = a_nom - t; v < a_nom; ++v) anarch[std::size_t(v)] = 1;

  std::vector<Edge4> edges;
  std::vector<char> typical_base;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int k = j + 1; k < N; ++k)
        for (int l = k + 1; l < N; ++l) {
          int mass = eff_a[std::size_t(i)] + eff_a[std::size_t(j)] +
                     eff_a[std::size_t(k)] + eff_a[std::size_t(l)];
          bool base = mass == 1 || mass == 3;
          bool neut = r.include_neutral && (mass == 0 || mass == 4);
          // A quadruple through an anarchist plants only via the B-side
          // seeds: that still feeds every {a,a',z} triple s neighbors, but
          // caps the anarchist's cross link at s*C(|A|-1,2), below the
          // typicality threshold, instead of burying it under seed mass.
          bool has_z = anarch[std::size_t(i)] || anarch[std::size_t(j)] ||
                       anarch[std::size_t(k)] || anarch[std::size_t(l)];
          bool meets = has_z ? (in_sb[std::size_t(i)] || in_sb[std::size_t(j)] ||
                                in_sb[std::size_t(k)] || in_sb[std::size_t(l)])
                             : (in_s[std::size_t(i)] || in_s[std::size_t(j)] ||
                                in_s[std::size_t(k)] || in_s[std::size_t(l)]);
          bool planted = mass == 2 && s > 0 && meets;
          if (base || neut || planted) {
            edges.push_back(Edge4{std::uint16_t(i), std::uint16_t(j),
                                  std::uint16_t(k), std::uint16_t(l)});
            typical_base.push_back(base ? 1 : 0);
          }
        }

  TripleRanker tr(N);
  std::vector<std::uint32_t> cod(tr.count(), 0);
  for (const auto& e : edges) bump_codegrees(tr, cod, e, +1);

  const int demand = r.demand_cycle_threshold ? r.demanded_delta3() : 0;
  if (demand > 0) {
    std::uint32_t d0 = *std::min_element(cod.begin(), cod.end());
    if (int(d0) < demand)
      fail(Err::threshold_unreachable,
           "generated instance starts below the demanded codegree " +
               std::to_string(demand) + " (got " + std::to_string(d0) + ")");
  }

  if (r.deletion_rate > 0.0) {
    std::mt19937_64 rng(r.rng_seed);
    std::bernoulli_distribution pick(r.deletion_rate);
    std::vector<char> dead(edges.size(), 0);
    for (std::size_t idx = 0; idx < edges.size(); ++idx) {
      if (!typical_base[idx] || !pick(rng)) continue;
      const Edge4& e = edges[idx];
      bool safe = true;
      for (int tt = 0; tt < 4 && safe; ++tt) {
        int tri[3];
        int m = 0;
        for (int u = 0; u < 4; ++u)
          if (u != tt) tri[m++] = e[u];
        if (int(cod[tr.rank(tri[0], tri[1], tri[2])]) - 1 < demand)
          safe = false;
      }
      if (safe) {
        bump_codegrees(tr, cod, e, -1);
        dead[idx] = 1;
      }
    }
    std::vector<Edge4> kept;
    kept.reserve(edges.size());
    for (std::size_t idx = 0; idx < edges.size(); ++idx)
      if (!dead[idx]) kept.push_back(edges[idx]);
    edges.swap(kept);
  }

  BenchmarkInstance out{Hypergraph4::from_edges(N, std::move(edges)),
                        Partition::front_half(N),
                        std::vector<PlantedClass>(std::size_t(N),
                                                  PlantedClass::typical),
                        0,
                        0,
                        r};
  out.delta3 = int(*std::min_element(cod.begin(), cod.end()));
  for (int v = 0; v < s; ++v) out.planted[std::size_t(v)] = PlantedClass::medium;
  for (int v = a_nom; v < a_nom + s; ++v)
    out.planted[std::size_t(v)] = PlantedClass::medium;
  for (int v = a_nom - t; v < a_nom; ++v)
    out.planted[std::size_t(v)] = PlantedClass::anarchist;
  out.aabb = count_aabb(out.graph, out.part);
  return out;
}

Hypergraph4 build_matching_fill(int n, std::uint64_t rng_seed) {
  if (n < 4 || n % 2 != 0)
    fail(Err::out_of_range, "matching fill needs even n >= 4");
  const int N = 2 * n;
  auto base = build_h0(n, n, false);
  std::vector<Edge4> edges = base.edges();
  std::mt19937_64 rng(rng_seed);
  std::vector<int> pool(std::size_t(n), 0);
  auto add_matchings = [&](int lo_pair, int lo_pool) {
    for (int i = lo_pair; i < lo_pair + n; ++i)
      for (int j = i + 1; j < lo_pair + n; ++j) {
        std::iota(pool.begin(), pool.end(), lo_pool);
        std::shuffle(pool.begin(), pool.end(), rng);
        for (int k = 0; k < n; k += 2) {
          int q[4] = {i, j, pool[std::size_t(k)], pool[std::size_t(k + 1)]};
          std::sort(q, q + 4);
          edges.push_back(Edge4{std::uint16_t(q[0]), std::uint16_t(q[1]),
                                std::uint16_t(q[2]), std::uint16_t(q[3])});
        }
      }
  };
  add_matchings(0, n);   // per A-pair, a matching on B
  add_matchings(n, 0);   // per B-pair, a matching on A
  return Hypergraph4::from_edges(N, std::move(edges));
}

std::uint64_t count_aabb(const Hypergraph4& h, const Partition& p) {
  if (p.n() != h.vertex_count())
    fail(Err::out_of_range, "partition does not cover the vertex set");
  std::uint64_t c = 0;
  for (const auto& e : h.edges())
    if (side_mass(p.a(), e) == 2) ++c;
  return c;
}

namespace {

std::uint64_t aabb_under(const Hypergraph4& h, const DynBitset& abits) {
  std::uint64_t c = 0;
  for (const auto& e : h.edges()) {
    int m = (abits.test(e[0]) ? 1 : 0) + (abits.test(e[1]) ? 1 : 0) +
            (abits.test(e[2]) ? 1 : 0) + (abits.test(e[3]) ? 1 : 0);
    if (m == 2) ++c;
  }
  return c;
}

BApproximation exact_b(const Hypergraph4& h) {
  const int N = h.vertex_count();
  if (N < 4) fail(Err::too_few_vertices, "needs at least 4 vertices");
  if (N > 28) fail(Err::too_large, "exhaustive bipartition capped at 28");
  std::vector<std::uint32_t> emasks;
  emasks.reserve(h.edge_count());
  for (const auto& e : h.edges())
    emasks.push_back((1u << e[0]) | (1u << e[1]) | (1u << e[2]) |
                     (1u << e[3]));
  const int k = (N + 1) / 2;
  const bool even = N % 2 == 0;
  // For even N the count is invariant under swapping sides, so vertex 0 can
  // be pinned to A.
  const int pool_n = even ? N - 1 : N;
  const int kk = even ? k - 1 : k;
  std::uint64_t best = ~std::uint64_t(0);
  std::uint32_t best_mask = 0;
  std::vector<int> c(std::size_t(kk), 0);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    std::uint32_t amask = even ? 1u : 0u;
    for (int idx : c) amask |= 1u << (even ? idx + 1 : idx);
    std::uint64_t cnt = 0;
    for (auto m : emasks)
      if (std::popcount(m & amask) == 2) ++cnt;
    if (cnt < best) {
      best = cnt;
      best_mask = amask;
    }
    int i = kk - 1;
    while (i >= 0 && c[std::size_t(i)] == pool_n - kk + i) --i;
    if (i < 0) break;
    ++c[std::size_t(i)];
    for (int j = i + 1; j < kk; ++j) c[std::size_t(j)] = c[std::size_t(j - 1)] + 1;
  }
  std::vector<int> a_list;
  for (int v = 0; v < N; ++v)
    if (best_mask & (1u << v)) a_list.push_back(v);
  return {best, Partition(N, a_list), true};
}

struct SwapTables {
  std::vector<long long> I;
  std::vector<std::uint32_t> t0, t1, t2;  // rest-pattern tallies by A-mass
};

void fill_tables(const Hypergraph4& h, const DynBitset& abits, SwapTables& s) {
  const std::size_t N = std::size_t(h.vertex_count());
  s.I.assign(N, 0);
  s.t0.assign(N * N, 0);
  s.t1.assign(N * N, 0);
  s.t2.assign(N * N, 0);
  for (const auto& e : h.edges()) {
    int in[4];
    int mass = 0;
    for (int i = 0; i < 4; ++i) {
      in[i] = abits.test(e[i]) ? 1 : 0;
      mass += in[i];
    }
    for (int i = 0; i < 4; ++i) {
      int rm = mass - in[i];
      s.I[e[i]] += (rm == 2) - (rm == 1);
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        int rm = mass - in[i] - in[j];
        auto& t = rm == 2 ? s.t2 : (rm == 1 ? s.t1 : s.t0);
        t[std::size_t(e[i]) * N + e[j]]++;
        t[std::size_t(e[j]) * N + e[i]]++;
      }
  }
}

long long swap_delta(const SwapTables& s, std::size_t N, int a, int b) {
  std::size_t ij = std::size_t(a) * N + std::size_t(b);
  return s.I[std::size_t(a)] - s.I[std::size_t(b)] + 2 * (long long)s.t1[ij] -
         (long long)s.t2[ij] - (long long)s.t0[ij];
}

std::uint64_t descend(const Hypergraph4& h, DynBitset& abits,
                      int max_iters) {
  const std::size_t N = std::size_t(h.vertex_count());
  SwapTables tabs;
  std::uint64_t prev = aabb_under(h, abits);
  for (int iter = 0; iter < max_iters; ++iter) {
    fill_tables(h, abits, tabs);
    std::vector<int> avec, bvec;
    for (int v = 0; v < int(N); ++v)
      (abits.test(std::size_t(v)) ? avec : bvec).push_back(v);
    struct Cand {
      long long delta;
      int a, b;
    };
    std::vector<Cand> cands;
    for (int a : avec)
      for (int b : bvec) {
        long long d = swap_delta(tabs, N, a, b);
        if (d < 0) cands.push_back({d, a, b});
      }
    if (cands.empty()) break;  // certified: no single swap improves
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      if (x.delta != y.delta) return x.delta < y.delta;
      if (x.a != y.a) return x.a < y.a;
      return x.b < y.b;
    });
    DynBitset saved = abits;
    std::vector<char> used(N, 0);
    for (const auto& c : cands) {
      if (used[std::size_t(c.a)] || used[std::size_t(c.b)]) continue;
      used[std::size_t(c.a)] = used[std::size_t(c.b)] = 1;
      abits.reset(std::size_t(c.a));
      abits.set(std::size_t(c.b));
    }
    std::uint64_t now = aabb_under(h, abits);
    if (now >= prev) {
      // batched deltas are only exact individually; fall back to one swap
      abits = saved;
      abits.reset(std::size_t(cands[0].a));
      abits.set(std::size_t(cands[0].b));
      now = aabb_under(h, abits);
    }
    prev = now;
  }
  return prev;
}

void balance_to(DynBitset& abits, int k, std::mt19937_64& rng) {
  std::vector<int> members = abits.to_vector();
  std::vector<int> outsiders;
  for (int v = 0; v < int(abits.size()); ++v)
    if (!abits.test(std::size_t(v))) outsiders.push_back(v);
  std::shuffle(members.begin(), members.end(), rng);
  std::shuffle(outsiders.begin(), outsiders.end(), rng);
  while (int(members.size()) > k) {
    abits.reset(std::size_t(members.back()));
    outsiders.push_back(members.back());
    members.pop_back();
  }
  while (int(members.size()) < k) {
    abits.set(std::size_t(outsiders.back()));
    members.push_back(outsiders.back());
    outsiders.pop_back();
  }
}

}  // namespace

BApproximation compute_b(const Hypergraph4& h, int exact_threshold,
                         std::uint64_t rng_seed) {
  const int N = h.vertex_count();
  if (N < 4) fail(Err::too_few_vertices, "needs at least 4 vertices");
  if (N <= exact_threshold) return exact_b(h);

  std::mt19937_64 rng(rng_seed);
  const int k = (N + 1) / 2;
  std::vector<DynBitset> starts;

  {  // canonical id-order start
    DynBitset fh{std::size_t(N)};
    for (int v = 0; v < k; ++v) fh.set(std::size_t(v));
    starts.push_back(fh);
  }
  {  // low-codegree triple: its neighborhood hugs one side
    int bi = 0, bj = 1, bk = 2, bestd = h.vertex_count() + 1;
    std::uniform_int_distribution<int> pick(0, N - 1);
    for (int trial = 0; trial < 300; ++trial) {
      int i = pick(rng), j = pick(rng), kk = pick(rng);
      if (i == j || j == kk || i == kk) continue;
      int d = h.codegree(i, j, kk);
      if (d < bestd) {
        bestd = d;
        bi = i;
        bj = j;
        bk = kk;
      }
    }
    DynBitset nb = h.neighborhood(bi, bj, bk);
    balance_to(nb, k, rng);
    starts.push_back(nb);
  }
  const int restarts = N <= 24 ? 14 : (N <= 90 ? 6 : 4);
  std::vector<int> ids(std::size_t(N), 0);
  std::iota(ids.begin(), ids.end(), 0);
  while (int(starts.size()) < restarts) {
    std::shuffle(ids.begin(), ids.end(), rng);
    DynBitset s{std::size_t(N)};
    for (int v = 0; v < k; ++v) s.set(std::size_t(ids[std::size_t(v)]));
    starts.push_back(s);
  }

  std::uint64_t best = ~std::uint64_t(0);
  DynBitset best_a;
  for (auto& s : starts) {
    std::uint64_t val = descend(h, s, 2 * N);
    if (val < best) {
      best = val;
      best_a = s;
    }
  }
  return {best, Partition(N, best_a.to_vector()), false};
}

}  // namespace h4
