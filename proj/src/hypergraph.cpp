#include "h4/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace h4 {

std::uint64_t choose(std::uint64_t n, unsigned k) {
  switch (k) {
    case 0:
      return 1;
    case 1:
      return n;
    case 2:
      return n < 2 ? 0 : n * (n - 1) / 2;
    case 3:
      return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
    case 4:
      return n < 4 ? 0 : n * (n - 1) * (n - 2) / 6 * (n - 3) / 4;
    default:
      fail(Err::out_of_range, "choose supports k <= 4");
  }
}

std::uint64_t edge_key(const Edge4& e) {
  return (std::uint64_t(e[0]) << 48) | (std::uint64_t(e[1]) << 32) |
         (std::uint64_t(e[2]) << 16) | std::uint64_t(e[3]);
}

Edge4 make_edge(int a, int b, int c, int d) {
  std::array<int, 4> v{a, b, c, d};
  std::sort(v.begin(), v.end());
  if (v[0] == v[1] || v[1] == v[2] || v[2] == v[3])
    fail(Err::degenerate_edge, "repeated vertex in quadruple {" +
                                   std::to_string(a) + "," + std::to_string(b) +
                                   "," + std::to_string(c) + "," +
                                   std::to_string(d) + "}");
  return Edge4{std::uint16_t(v[0]), std::uint16_t(v[1]), std::uint16_t(v[2]),
               std::uint16_t(v[3])};
}

Hypergraph4 Hypergraph4::build(int vertex_count,
                               const std::vector<std::array<int, 4>>& quads) {
  if (vertex_count < 0)
    fail(Err::out_of_range, "negative vertex count");
  if (vertex_count > 0xFFFF)
    fail(Err::out_of_range, "vertex count exceeds id width");
  std::vector<Edge4> edges;
  edges.reserve(quads.size());
  for (const auto& q : quads) {
    for (int v : q)
      if (v < 0 || v >= vertex_count)
        fail(Err::out_of_range,
             "vertex " + std::to_string(v) + " outside [0, " +
                 std::to_string(vertex_count) + ")");
    edges.push_back(make_edge(q[0], q[1], q[2], q[3]));
  }
  return from_edges(vertex_count, std::move(edges));
}

Hypergraph4 Hypergraph4::from_edges(int vertex_count,
                                    std::vector<Edge4> edges) {
  if (vertex_count < 0)
    fail(Err::out_of_range, "negative vertex count");
  if (vertex_count > 0xFFFF)
    fail(Err::out_of_range, "vertex count exceeds id width");
  for (const auto& e : edges) {
    if (!(e[0] < e[1] && e[1] < e[2] && e[2] < e[3]))
      fail(Err::degenerate_edge, "quadruple not strictly ascending");
    if (int(e[3]) >= vertex_count)
      fail(Err::out_of_range, "vertex " + std::to_string(e[3]) +
                                  " outside [0, " +
                                  std::to_string(vertex_count) + ")");
  }
  Hypergraph4 h;
  h.n_ = vertex_count;
  h.edges_ = std::move(edges);
  std::sort(h.edges_.begin(), h.edges_.end());
  h.edges_.erase(std::unique(h.edges_.begin(), h.edges_.end()),
                 h.edges_.end());
  h.keys_.reserve(h.edges_.size() * 2);
  for (const auto& e : h.edges_) h.keys_.insert(edge_key(e));

  h.eager_ = vertex_count >= 4 && vertex_count <= kEagerLimit;
  if (h.eager_) {
    h.words_ = std::size_t(vertex_count + 63) / 64;
    h.nbr_.assign(h.triple_count() * h.words_, 0);
    for (const auto& e : h.edges_) {
      for (int t = 0; t < 4; ++t) {
        int tri[3];
        int m = 0;
        for (int u = 0; u < 4; ++u)
          if (u != t) tri[m++] = e[u];
        std::size_t r = h.triple_rank(tri[0], tri[1], tri[2]);
        h.nbr_[r * h.words_ + (std::size_t(e[t]) >> 6)] |=
            std::uint64_t(1) << (e[t] & 63);
      }
    }
  }
  return h;
}

bool Hypergraph4::has_edge(int a, int b, int c, int d) const {
  std::array<int, 4> v{a, b, c, d};
  std::sort(v.begin(), v.end());
  if (v[0] == v[1] || v[1] == v[2] || v[2] == v[3]) return false;
  if (v[0] < 0 || v[3] >= n_) return false;
  return keys_.count(edge_key(Edge4{std::uint16_t(v[0]), std::uint16_t(v[1]),
                                    std::uint16_t(v[2]),
                                    std::uint16_t(v[3])})) > 0;
}

void Hypergraph4::order_triple(int& a, int& b, int& c) const {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  if (a == b || b == c)
    fail(Err::degenerate_edge, "repeated vertex in triple");
  if (a < 0 || c >= n_) fail(Err::out_of_range, "triple vertex out of range");
}

DynBitset Hypergraph4::neighborhood(int a, int b, int c) const {
  order_triple(a, b, c);
  DynBitset out{std::size_t(n_)};
  if (eager_) {
    std::size_t r = triple_rank(a, b, c) * words_;
    for (std::size_t i = 0; i < words_; ++i) out.word(i) = nbr_[r + i];
    return out;
  }
  for (int x = 0; x < n_; ++x) {
    if (x == a || x == b || x == c) continue;
    if (has_edge(a, b, c, x)) out.set(std::size_t(x));
  }
  return out;
}

int Hypergraph4::codegree(int a, int b, int c) const {
  order_triple(a, b, c);
  if (eager_) {
    std::size_t r = triple_rank(a, b, c) * words_;
    int cnt = 0;
    for (std::size_t i = 0; i < words_; ++i)
      cnt += std::popcount(nbr_[r + i]);
    return cnt;
  }
  return int(neighborhood(a, b, c).count());
}

int Hypergraph4::min_codegree() const {
  if (n_ < 4) fail(Err::too_few_vertices, "codegree needs at least 4 vertices");
  int best = n_;
  if (eager_) {
    const std::size_t rows = triple_count();
    for (std::size_t r = 0; r < rows; ++r) {
      int cnt = 0;
      for (std::size_t i = 0; i < words_; ++i)
        cnt += std::popcount(nbr_[r * words_ + i]);
      if (cnt < best) best = cnt;
      if (best == 0) return 0;
    }
    return best;
  }
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) {
        int cnt = 0;
        for (int x = 0; x < n_; ++x)
          if (x != i && x != j && x != k && has_edge(i, j, k, x)) ++cnt;
        if (cnt < best) best = cnt;
        if (best == 0) return 0;
      }
  return best;
}

Partition::Partition(int n, const std::vector<int>& a_side)
    : a_(std::size_t(n)), b_(std::size_t(n)) {
  for (int v : a_side) {
    if (v < 0 || v >= n)
      fail(Err::out_of_range, "partition vertex " + std::to_string(v));
    if (a_.test(std::size_t(v)))
      fail(Err::degenerate_edge, "duplicate vertex in side A");
    a_.set(std::size_t(v));
  }
  for (int v = 0; v < n; ++v)
    if (!a_.test(std::size_t(v))) b_.set(std::size_t(v));
  na_ = int(a_.count());
  nb_ = n - na_;
}

Partition::Partition(DynBitset a, DynBitset b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size())
    fail(Err::out_of_range, "side universes differ");
  if (a_.intersects(b_)) fail(Err::degenerate_edge, "sides overlap");
  na_ = int(a_.count());
  nb_ = int(b_.count());
  if (std::size_t(na_ + nb_) != a_.size())
    fail(Err::out_of_range, "sides do not cover the vertex set");
}

Partition Partition::front_half(int n) {
  if (n < 0) fail(Err::out_of_range, "negative vertex count");
  std::vector<int> a;
  for (int v = 0; v < (n + 1) / 2; ++v) a.push_back(v);
  return Partition(n, a);
}

Partition Partition::with_moved(int v) const {
  if (v < 0 || v >= n()) fail(Err::out_of_range, "vertex out of range");
  DynBitset a = a_, b = b_;
  if (a.test(std::size_t(v))) {
    a.reset(std::size_t(v));
    b.set(std::size_t(v));
  } else {
    b.reset(std::size_t(v));
    a.set(std::size_t(v));
  }
  return Partition(std::move(a), std::move(b));
}

}  // namespace h4
