#include "h4/dense3.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "h4/errors.hpp"

namespace h4 {

namespace {

void check_triple(int m, int x, int y, int z) {
  if (x < 0 || y < 0 || z < 0 || x >= m || y >= m || z >= m)
    fail(Err::out_of_range, "vertex out of range for 3-graph on " +
                                std::to_string(m) + " vertices");
  if (x == y || x == z || y == z)
    fail(Err::degenerate_edge, "3-edge needs three distinct vertices");
}

std::vector<int> unused_bits(const DynBitset& row, const DynBitset& used) {
  std::vector<int> out;
  row.for_each([&](int v) {
    if (!used.test(std::size_t(v))) out.push_back(v);
  });
  return out;
}

// Backtracking back-extension. Returns true when path reached goal_len
// (plus, for cycles, the two wrap edges hold). node budget is shared.
struct PathSearch {
  const Graph3* g = nullptr;
  std::mt19937_64* rng = nullptr;
  std::vector<int> path;
  DynBitset used;
  long long nodes = 0;
  long long budget = 0;
  int goal = 0;
  bool close_cycle = false;
  std::vector<int> best;

  bool closed_ok() const {
    int m = int(path.size());
    return g->has_edge(path[std::size_t(m - 2)], path[std::size_t(m - 1)],
                       path[0]) &&
           g->has_edge(path[std::size_t(m - 1)], path[0], path[1]);
  }

  bool dfs() {
    if (int(path.size()) > int(best.size())) best = path;
    if (int(path.size()) == goal) {
      if (!close_cycle || closed_ok()) return true;
    }
    if (int(path.size()) >= goal) return false;
    if (++nodes > budget) return false;
    int k = int(path.size());
    std::vector<int> cand = unused_bits(
        g->row(path[std::size_t(k - 2)], path[std::size_t(k - 1)]), used);
    std::shuffle(cand.begin(), cand.end(), *rng);
    for (int v : cand) {
      path.push_back(v);
      used.set(std::size_t(v));
      if (dfs()) return true;
      used.reset(std::size_t(v));
      path.pop_back();
      if (nodes > budget) return false;
    }
    return false;
  }
};

}  // namespace

Graph3::Graph3(int m) : m_(m) {
  if (m < 1) fail(Err::out_of_range, "3-graph needs at least one vertex");
  rows_.assign(std::size_t(m) * std::size_t(m), DynBitset(std::size_t(m)));
  deg_.assign(std::size_t(m), 0);
}

std::size_t Graph3::at(int u, int v) const {
  return std::size_t(u) * std::size_t(m_) + std::size_t(v);
}

void Graph3::add_edge(int x, int y, int z) {
  check_triple(m_, x, y, z);
  if (has_edge(x, y, z)) return;
  const int t[3] = {x, y, z};
  for (int i = 0; i < 3; ++i) {
    int u = t[i], v = t[(i + 1) % 3], w = t[(i + 2) % 3];
    rows_[at(u, v)].set(std::size_t(w));
    rows_[at(v, u)].set(std::size_t(w));
    ++deg_[std::size_t(u)];
  }
  ++edges_;
}

bool Graph3::has_edge(int x, int y, int z) const {
  check_triple(m_, x, y, z);
  return rows_[at(x, y)].test(std::size_t(z));
}

const DynBitset& Graph3::row(int u, int v) const {
  if (u < 0 || v < 0 || u >= m_ || v >= m_ || u == v)
    fail(Err::out_of_range, "bad pair row");
  return rows_[at(u, v)];
}

std::uint64_t Graph3::min_degree() const {
  std::uint64_t d = deg_.empty() ? 0 : deg_[0];
  for (auto x : deg_) d = std::min(d, x);
  return d;
}

std::vector<int> greedy_dense_path(const Graph3& g, double density,
                                   std::uint64_t rng_seed) {
  if (!(density > 0.0 && density <= 1.0))
    fail(Err::out_of_range, "density fraction must lie in (0,1]");
  const int m = g.vertex_count();
  const double cap = density * double(choose(std::uint64_t(m), 3));
  if (double(g.edge_count()) < cap)
    fail(Err::density_too_low, "have " + std::to_string(g.edge_count()) +
                                   " edges, need at least " +
                                   std::to_string(cap));
  const int target = int(density * double(m) / 3.0);
  std::mt19937_64 rng{rng_seed};
  if (g.edge_count() == 0) {
    // Only reachable when m < 3 made the requirement vacuous.
    std::vector<int> out;
    for (int v = 0; v < std::min(m, target > 0 ? target : 1); ++v)
      out.push_back(v);
    return out;
  }

  std::vector<int> best;
  for (int attempt = 0; attempt < 24 && int(best.size()) < m; ++attempt) {
    // Random starting edge, random orientation.
    int x = -1, y = -1, z = -1;
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (int tries = 0; tries < 64 && z < 0; ++tries) {
      int u = pick(rng), v = pick(rng);
      if (u == v) continue;
      std::vector<int> ws = g.row(u, v).to_vector();
      if (ws.empty()) continue;
      x = u;
      y = v;
      z = ws[std::uniform_int_distribution<std::size_t>(
          0, ws.size() - 1)(rng)];
    }
    if (z < 0) continue;
    PathSearch s;
    s.g = &g;
    s.rng = &rng;
    s.path = {x, y, z};
    s.used = DynBitset(std::size_t(m));
    for (int v : s.path) s.used.set(std::size_t(v));
    s.goal = m;
    s.budget = 20000;
    s.dfs();
    std::vector<int> p = s.best;
    // Grow the front greedily; the DFS only pushed the back.
    DynBitset used{std::size_t(m)};
    for (int v : p) used.set(std::size_t(v));
    while (int(p.size()) < m) {
      std::vector<int> cand = unused_bits(g.row(p[1], p[0]), used);
      if (cand.empty()) break;
      int v = cand[std::uniform_int_distribution<std::size_t>(
          0, cand.size() - 1)(rng)];
      p.insert(p.begin(), v);
      used.set(std::size_t(v));
    }
    if (p.size() > best.size()) best = p;
  }
  if (int(best.size()) < target)
    fail(Err::search_exhausted,
         "best path " + std::to_string(best.size()) + " below target " +
             std::to_string(target));
  return best;
}

std::vector<int> dense3_hamiltonian_cycle(const Graph3& g,
                                          std::uint64_t rng_seed) {
  const int m = g.vertex_count();
  if (m < 4)
    fail(Err::too_few_vertices, "tight 3-uniform cycle needs 4 vertices");
  auto verified = [&](const std::vector<int>& cyc) {
    for (int i = 0; i < m; ++i)
      if (!g.has_edge(cyc[std::size_t(i)], cyc[std::size_t((i + 1) % m)],
                      cyc[std::size_t((i + 2) % m)]))
        return false;
    return true;
  };
  if (g.edge_count() == choose(std::uint64_t(m), 3)) {
    std::vector<int> cyc(std::size_t(m), 0);
    for (int i = 0; i < m; ++i) cyc[std::size_t(i)] = i;
    return cyc;
  }
  if (3 * g.min_degree() <= 2 * choose(std::uint64_t(m - 1), 2))
    fail(Err::hypothesis_violated,
         "min degree " + std::to_string(g.min_degree()) +
             " not above two thirds of " +
             std::to_string(choose(std::uint64_t(m - 1), 2)));
  std::mt19937_64 rng{rng_seed};

  if (m <= 12) {
    // Exhaustive: fix the first vertex, enumerate continuations.
    std::vector<int> path{0};
    DynBitset used{std::size_t(m)};
    used.set(0);
    std::vector<int> found;
    auto rec = [&](auto&& self) -> bool {
      if (int(path.size()) == m) {
        if (g.has_edge(path[std::size_t(m - 2)], path[std::size_t(m - 1)],
                       path[0]) &&
            g.has_edge(path[std::size_t(m - 1)], path[0], path[1])) {
          found = path;
          return true;
        }
        return false;
      }
      int k = int(path.size());
      for (int v = 0; v < m; ++v) {
        if (used.test(std::size_t(v))) continue;
        if (k >= 2 &&
            !g.has_edge(path[std::size_t(k - 2)], path[std::size_t(k - 1)],
                        v))
          continue;
        path.push_back(v);
        used.set(std::size_t(v));
        if (self(self)) return true;
        used.reset(std::size_t(v));
        path.pop_back();
      }
      return false;
    };
    if (rec(rec)) return found;
    fail(Err::search_exhausted, "no tight Hamiltonian cycle exists");
  }

  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uniform_int_distribution<int> pick(0, m - 1);
    int x = -1, y = -1, z = -1;
    for (int tries = 0; tries < 64 && z < 0; ++tries) {
      int u = pick(rng), v = pick(rng);
      if (u == v) continue;
      std::vector<int> ws = g.row(u, v).to_vector();
      if (ws.empty()) continue;
      x = u;
      y = v;
      z = ws[std::uniform_int_distribution<std::size_t>(
          0, ws.size() - 1)(rng)];
    }
    if (z < 0) continue;
    PathSearch s;
    s.g = &g;
    s.rng = &rng;
    s.path = {x, y, z};
    s.used = DynBitset(std::size_t(m));
    for (int v : s.path) s.used.set(std::size_t(v));
    s.goal = m;
    s.close_cycle = true;
    s.budget = 200000;
    if (s.dfs()) {
      if (!verified(s.path))
        fail(Err::search_exhausted, "internal: unverified cycle");
      return s.path;
    }
  }
  fail(Err::search_exhausted,
       "randomized extension budget exhausted on " + std::to_string(m) +
           " vertices");
}

std::vector<int> kuhn_matching(const std::vector<DynBitset>& adj, int nr) {
  const int nl = int(adj.size());
  if (nr < 0) fail(Err::out_of_range, "right side size must be non-negative");
  std::vector<int> ml(std::size_t(nl), -1), mr(std::size_t(nr), -1);
  std::vector<char> vis;
  auto aug = [&](auto&& self, int l) -> bool {
    bool ok = false;
    adj[std::size_t(l)].for_each([&](int r) {
      if (ok || vis[std::size_t(r)]) return;
      vis[std::size_t(r)] = 1;
      if (mr[std::size_t(r)] < 0 || self(self, mr[std::size_t(r)])) {
        mr[std::size_t(r)] = l;
        ml[std::size_t(l)] = r;
        ok = true;
      }
    });
    return ok;
  };
  for (int l = 0; l < nl; ++l) {
    if (!adj[std::size_t(l)].any()) continue;
    vis.assign(std::size_t(nr), 0);
    aug(aug, l);
  }
  return ml;
}

}  // namespace h4
