#include "h4/oracle.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <string>

#include "h4/errors.hpp"

namespace h4 {

namespace {

constexpr int kDpLimit = 16;
constexpr int kExhaustiveLimit = 20;
constexpr int kScanLimit = 14;

// Randomized depth-first extension with a global expansion budget. Cheap
// enough to always try before paying for the subset table; on dense yes
// instances it almost always wins.
struct GreedySearch {
  const Hypergraph4& h;
  int n;
  bool cycle;
  std::mt19937_64 rng;
  long budget;
  std::vector<int> path;
  std::vector<char> used;

  GreedySearch(const Hypergraph4& graph, bool want_cycle, long expansions)
      : h(graph),
        n(graph.vertex_count()),
        cycle(want_cycle),
        rng(0x9e3779b97f4a7c15ULL + std::uint64_t(graph.edge_count())),
        budget(expansions),
        used(std::size_t(n), 0) {}

  bool closes() const {
    return h.has_edge(path[n - 3], path[n - 2], path[n - 1], path[0]) &&
           h.has_edge(path[n - 2], path[n - 1], path[0], path[1]) &&
           h.has_edge(path[n - 1], path[0], path[1], path[2]);
  }

  bool extend() {
    int sz = int(path.size());
    if (sz == n) return cycle ? closes() : true;
    if (budget-- <= 0) return false;
    std::vector<int> cand;
    for (int w = 0; w < n; ++w) {
      if (used[w]) continue;
      if (sz >= 3 &&
          !h.has_edge(path[sz - 3], path[sz - 2], path[sz - 1], w))
        continue;
      cand.push_back(w);
    }
    std::shuffle(cand.begin(), cand.end(), rng);
    for (int w : cand) {
      path.push_back(w);
      used[w] = 1;
      if (extend()) return true;
      used[w] = 0;
      path.pop_back();
      if (budget <= 0) return false;
    }
    return false;
  }

  std::optional<std::vector<int>> run(int restarts) {
    for (int r = 0; r < restarts && budget > 0; ++r) {
      path.clear();
      std::fill(used.begin(), used.end(), 0);
      if (extend()) return path;
    }
    return std::nullopt;
  }
};

// emask[(y*n + z)*n + w] = bitmask over x with {x,y,z,w} an edge, i.e. the
// set of third-from-last vertices allowing a tight step y,z -> w.
std::vector<std::uint16_t> build_emask(const Hypergraph4& h) {
  int n = h.vertex_count();
  std::vector<std::uint16_t> em(std::size_t(n) * n * n, 0);
  for (const Edge4& e : h.edges()) {
    int v[4] = {e[0], e[1], e[2], e[3]};
    for (int xi = 0; xi < 4; ++xi)
      for (int yi = 0; yi < 4; ++yi) {
        if (yi == xi) continue;
        for (int zi = 0; zi < 4; ++zi) {
          if (zi == xi || zi == yi) continue;
          int wi = 6 - xi - yi - zi;
          em[(std::size_t(v[yi]) * n + v[zi]) * n + v[wi]] |=
              std::uint16_t(1u << v[xi]);
        }
      }
  }
  return em;
}

// Reachability table for tight paths: state (visited mask, last two
// vertices y,z), value = bitmask of feasible third-from-last x. Runs over
// an n-vertex graph given by emask; seeds are provided by the caller.
struct PathTable {
  int n;
  unsigned full;
  std::vector<std::uint16_t> dp;

  explicit PathTable(int vertices)
      : n(vertices),
        full((1u << vertices) - 1),
        dp((std::size_t(1) << vertices) * vertices * vertices, 0) {}

  std::uint16_t& at(unsigned mask, int y, int z) {
    return dp[(std::size_t(mask) * n + y) * n + z];
  }

  void reset() { std::fill(dp.begin(), dp.end(), std::uint16_t(0)); }

  void sweep(const std::vector<std::uint16_t>& em) {
    for (unsigned mask = 7; mask < full; ++mask) {
      if (std::popcount(mask) < 3) continue;
      for (int y = 0; y < n; ++y) {
        if (!(mask & (1u << y))) continue;
        for (int z = 0; z < n; ++z) {
          if (z == y || !(mask & (1u << z))) continue;
          std::uint16_t pred = at(mask, y, z);
          if (!pred) continue;
          for (int w = 0; w < n; ++w) {
            if (mask & (1u << w)) continue;
            if (pred & em[(std::size_t(y) * n + z) * n + w])
              at(mask | (1u << w), z, w) |= std::uint16_t(1u << y);
          }
        }
      }
    }
  }

  // Reconstructs the full-mask path ending x,y,z. Valid whenever
  // x is a set bit of at(full,y,z).
  std::vector<int> backtrack(int x, int y, int z,
                             const std::vector<std::uint16_t>& em) {
    std::vector<int> rev = {z, y, x};
    unsigned mask = full;
    while (std::popcount(mask) > 3) {
      unsigned pmask = mask & ~(1u << z);
      std::uint16_t prev =
          at(pmask, x, y) & em[(std::size_t(x) * n + y) * n + z];
      int xp = std::countr_zero(unsigned(prev));
      rev.push_back(xp);
      mask = pmask;
      z = y;
      y = x;
      x = xp;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }
};

std::optional<std::vector<int>> dp_ham_path(const Hypergraph4& h) {
  int n = h.vertex_count();
  auto em = build_emask(h);
  PathTable t(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      for (int z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        t.at((1u << x) | (1u << y) | (1u << z), y, z) |=
            std::uint16_t(1u << x);
      }
    }
  t.sweep(em);
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      if (z == y) continue;
      std::uint16_t pred = t.at(t.full, y, z);
      if (pred)
        return t.backtrack(std::countr_zero(unsigned(pred)), y, z, em);
    }
  return std::nullopt;
}

// Anchors the cycle at vertex 0 and fixes its two successors (v1, v2); the
// rest is a path table over the other n-1 vertices (ids shifted down by
// one) with the three wrap windows checked at full mask.
std::optional<std::vector<int>> dp_ham_cycle(const Hypergraph4& h) {
  int n = h.vertex_count();
  int m = n - 1;
  std::vector<Edge4> inner;
  std::vector<std::uint16_t> zmask(std::size_t(m) * m, 0);
  for (const Edge4& e : h.edges()) {
    if (e[0] == 0) {
      int v[3] = {e[1] - 1, e[2] - 1, e[3] - 1};
      for (int xi = 0; xi < 3; ++xi)
        for (int yi = 0; yi < 3; ++yi) {
          if (yi == xi) continue;
          int zi = 3 - xi - yi;
          zmask[std::size_t(v[yi]) * m + v[zi]] |=
              std::uint16_t(1u << v[xi]);
        }
    } else {
      inner.push_back(
          make_edge(e[0] - 1, e[1] - 1, e[2] - 1, e[3] - 1));
    }
  }
  auto sub = Hypergraph4::from_edges(m, std::move(inner));
  auto em = build_emask(sub);
  PathTable t(m);
  bool first_run = true;
  for (int v1 = 0; v1 < m; ++v1)
    for (int v2 = 0; v2 < m; ++v2) {
      if (v2 == v1) continue;
      std::uint16_t seeds = zmask[std::size_t(v1) * m + v2];
      seeds &= std::uint16_t(~((1u << v1) | (1u << v2)));
      if (!seeds) continue;
      if (!first_run) t.reset();
      first_run = false;
      for (int w = 0; w < m; ++w)
        if (seeds & (1u << w))
          t.at((1u << v1) | (1u << v2) | (1u << w), v2, w) |=
              std::uint16_t(1u << v1);
      t.sweep(em);
      for (int y = 0; y < m; ++y)
        for (int z = 0; z < m; ++z) {
          if (z == y) continue;
          std::uint16_t pred = t.at(t.full, y, z);
          if (!pred) continue;
          if (!h.has_edge(y + 1, z + 1, 0, v1 + 1)) continue;
          if (!h.has_edge(z + 1, 0, v1 + 1, v2 + 1)) continue;
          std::uint16_t ok = pred & zmask[std::size_t(y) * m + z];
          if (!ok) continue;
          auto inner_path =
              t.backtrack(std::countr_zero(unsigned(ok)), y, z, em);
          std::vector<int> cyc;
          cyc.reserve(n);
          cyc.push_back(0);
          for (int v : inner_path) cyc.push_back(v + 1);
          return cyc;
        }
    }
  return std::nullopt;
}

Hypergraph4 complete_graph(int n) {
  std::vector<Edge4> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d)
          edges.push_back(make_edge(a, b, c, d));
  return Hypergraph4::from_edges(n, std::move(edges));
}

}  // namespace

std::optional<TightPath> exact_ham_path(const Hypergraph4& h) {
  int n = h.vertex_count();
  if (n > kDpLimit)
    fail(Err::too_large, "path oracle handles at most " +
                             std::to_string(kDpLimit) + " vertices, got " +
                             std::to_string(n));
  if (n <= 3) {
    std::vector<int> seq(std::size_t(n), 0);
    std::iota(seq.begin(), seq.end(), 0);
    return TightPath{std::move(seq)};
  }
  std::optional<std::vector<int>> seq;
  GreedySearch greedy(h, false, 60000);
  seq = greedy.run(24);
  if (!seq) seq = dp_ham_path(h);
  if (!seq) return std::nullopt;
  TightPath p{std::move(*seq)};
  if (!is_hamiltonian_certificate(h, p))
    fail(Err::construction_failed, "path oracle produced a bad witness");
  return p;
}

std::optional<TightCycle> exact_ham_cycle(const Hypergraph4& h) {
  int n = h.vertex_count();
  if (n > kDpLimit)
    fail(Err::too_large, "cycle oracle handles at most " +
                             std::to_string(kDpLimit) + " vertices, got " +
                             std::to_string(n));
  if (n < 5) return std::nullopt;
  std::optional<std::vector<int>> seq;
  GreedySearch greedy(h, true, 120000);
  seq = greedy.run(32);
  if (!seq) seq = dp_ham_cycle(h);
  if (!seq) return std::nullopt;
  TightCycle c{std::move(*seq)};
  if (!is_hamiltonian_certificate(h, c))
    fail(Err::construction_failed, "cycle oracle produced a bad witness");
  return c;
}

BApproximation exhaustive_b(const Hypergraph4& h) {
  int n = h.vertex_count();
  if (n < 4) fail(Err::too_few_vertices, "need at least 4 vertices");
  if (n > kExhaustiveLimit)
    fail(Err::too_large, "exhaustive split search handles at most " +
                             std::to_string(kExhaustiveLimit) +
                             " vertices, got " + std::to_string(n));
  int k = (n + 1) / 2;
  const auto& edges = h.edges();
  std::vector<int> idx(std::size_t(k), 0);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<char> in_a(std::size_t(n), 0);
  std::uint64_t best = ~std::uint64_t(0);
  std::vector<int> best_idx = idx;
  for (;;) {
    std::fill(in_a.begin(), in_a.end(), 0);
    for (int i : idx) in_a[std::size_t(i)] = 1;
    std::uint64_t c = 0;
    for (const Edge4& e : edges)
      c += (in_a[e[0]] + in_a[e[1]] + in_a[e[2]] + in_a[e[3]]) == 2;
    if (c < best) {
      best = c;
      best_idx = idx;
      if (best == 0) break;
    }
    int i = k - 1;
    while (i >= 0 && idx[std::size_t(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[std::size_t(i)];
    for (int j = i + 1; j < k; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
  }
  return BApproximation{best, Partition(n, best_idx), true};
}

std::vector<ThresholdRow> threshold_scan(ScanFamily family, bool cycle,
                                         const std::vector<int>& sizes) {
  std::vector<ThresholdRow> out;
  out.reserve(sizes.size());
  for (int n : sizes) {
    if (n > kScanLimit)
      fail(Err::too_large, "scan handles at most " +
                               std::to_string(kScanLimit) +
                               " vertices, got " + std::to_string(n));
    if (n < 5) fail(Err::too_few_vertices, "scan sizes start at 5");
    Hypergraph4 g = [&] {
      switch (family) {
        case ScanFamily::split:
          return build_h0((n + 1) / 2, n / 2, false);
        case ScanFamily::split_prime:
          return build_h0_prime(n / 2, (n - 1) / 2);
        default:
          return complete_graph(n);
      }
    }();
    ThresholdRow row;
    row.total_vertices = n;
    row.delta3 = g.min_codegree();
    row.b_value = exhaustive_b(g).value;
    row.hamiltonian =
        cycle ? exact_ham_cycle(g).has_value() : exact_ham_path(g).has_value();
    out.push_back(row);
  }
  return out;
}

}  // namespace h4
