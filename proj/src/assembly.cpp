#include "h4/assembly.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "h4/connector.hpp"
#include "h4/errors.hpp"
#include "h4/extremal.hpp"

namespace h4 {
namespace {

void trace_line(const SolverParams& p, const std::string& s) {
  if (p.trace) p.trace->emit(s);
}

DynBitset to_bits(int n, const std::vector<int>& vs) {
  DynBitset b{std::size_t(n)};
  for (int v : vs) {
    if (v < 0 || v >= n) fail(Err::out_of_range, "vertex id out of range");
    b.set(std::size_t(v));
  }
  return b;
}

std::vector<int> triple_vec(const std::array<int, 3>& t) {
  return {t[0], t[1], t[2]};
}

bool same_side(const Partition& part, const std::vector<int>& vs, bool a) {
  for (int v : vs)
    if (part.in_a(v) != a) return false;
  return true;
}

// Windows j..j+3 of seq for j in [j_begin, j_end) must each hold exactly
// `expect` top-side vertices. The chained end words keep one minority per
// window; a violated count means a splice bug, so this fails loudly.
void check_window_masses(const Partition& part, const std::vector<int>& seq,
                         int j_begin, int j_end, int expect) {
  for (int j = std::max(0, j_begin); j < j_end; ++j) {
    if (j + 4 > int(seq.size())) break;
    int am = 0;
    for (int k = j; k < j + 4; ++k) am += part.in_a(seq[std::size_t(k)]);
    if (am != expect)
      fail(Err::construction_failed,
           "window at " + std::to_string(j) + " carries " + std::to_string(am) +
               " top vertices, expected " + std::to_string(expect));
  }
}

// Candidates from bits in random order; those passing pref first.
std::vector<int> ranked_candidates(const DynBitset& bits,
                                   const std::function<bool(int)>& pref,
                                   std::mt19937_64& rng) {
  std::vector<int> all = bits.to_vector();
  std::shuffle(all.begin(), all.end(), rng);
  std::stable_partition(all.begin(), all.end(), pref);
  return all;
}

}  // namespace

int side_difference(const Partition& part, const std::vector<int>& seq) {
  DynBitset seen{std::size_t(part.n())};
  long long a = 0, b = 0;
  for (int v : seq) {
    if (v < 0 || v >= part.n()) fail(Err::out_of_range, "vertex id out of range");
    if (seen.test(std::size_t(v))) continue;
    seen.set(std::size_t(v));
    (part.in_a(v) ? a : b) += 1;
  }
  long long d = (3 * a - b) % 8;
  return int((d + 8) % 8);
}

SolverParams effective_params(const Hypergraph4& h, const Partition& part,
                              const SolverParams& params) {
  params.validate();
  SolverParams out = params;
  if (!params.auto_scale) return out;
  TypicalityTables t = build_tables(h, part);
  const double na = part.a_size(), nb = part.b_size();
  std::vector<double> ratio;
  ratio.reserve(std::size_t(part.n()));
  for (int v = 0; v < part.n(); ++v) {
    const LinkProfile& lp = t.links[std::size_t(v)];
    double denom = part.in_a(v) ? na * double(choose(std::uint64_t(nb), 2))
                                : double(choose(std::uint64_t(na), 2)) * nb;
    ratio.push_back(denom > 0 ? double(part.in_a(v) ? lp.l_abb : lp.l_aab) / denom
                              : 0.0);
  }
  std::sort(ratio.begin(), ratio.end());
  const double median = ratio[ratio.size() / 2];
  out.eps1 = std::clamp(3.0 * median, params.eps1, 0.45);
  out.eps2 = std::max(params.eps2, out.eps1);
  out.eps3 = std::max(params.eps3, out.eps2);
  out.eps5 = std::max(params.eps5, out.eps3);
  trace_line(out, "autoscale median=" + std::to_string(median) + " eps1=" +
                      std::to_string(out.eps1) + " eps2=" +
                      std::to_string(out.eps2) + " eps3=" +
                      std::to_string(out.eps3) + " eps5=" +
                      std::to_string(out.eps5));
  return out;
}

std::array<double, 3> seq_scale(const SolverParams& params) {
  return {std::min(1.0, 4.0 * params.eps5), std::pow(params.eps5, 0.75),
          std::sqrt(params.eps5)};
}

std::array<int, 3> find_typical_triple(const Hypergraph4& h,
                                       const TypicalityTables& tables,
                                       const DynBitset& pool, double e1,
                                       double e2, double e3,
                                       std::mt19937_64& rng) {
  (void)h;
  std::vector<int> vs = pool.to_vector();
  if (vs.size() < 3)
    fail(Err::construction_failed,
         "typical triple pool holds " + std::to_string(vs.size()) + " vertices");
  if (vs.size() <= 24) {
    // Small pool: deterministic sweep, no sampling noise.
    for (std::size_t i = 0; i + 2 < vs.size(); ++i)
      for (std::size_t j = i + 1; j + 1 < vs.size(); ++j)
        for (std::size_t k = j + 1; k < vs.size(); ++k)
          if (tables.window_typical(vs[i], vs[j], vs[k], e1, e2, e3))
            return {vs[i], vs[j], vs[k]};
    fail(Err::construction_failed,
         "no typical triple in pool of " + std::to_string(vs.size()));
  }
  std::uniform_int_distribution<std::size_t> pick(0, vs.size() - 1);
  for (int it = 0; it < 600; ++it) {
    std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    if (i == j || i == k || j == k) continue;
    if (tables.window_typical(vs[i], vs[j], vs[k], e1, e2, e3))
      return {vs[i], vs[j], vs[k]};
  }
  fail(Err::construction_failed,
       "typical triple sampling exhausted over " + std::to_string(vs.size()) +
           " vertices");
}

DynBitset insertion_candidates(const Hypergraph4& h,
                               const std::vector<int>& word, int after,
                               const DynBitset& pool) {
  const int L = int(word.size());
  if (after < 0 || after >= L)
    fail(Err::out_of_range, "splice position outside the word");
  DynBitset out = pool;
  auto clip = [&](int i, int j, int k) {
    out &= h.neighborhood(word[std::size_t(i)], word[std::size_t(j)],
                          word[std::size_t(k)]);
  };
  if (after >= 2) clip(after - 2, after - 1, after);
  if (after >= 1 && after + 1 < L) clip(after - 1, after, after + 1);
  if (after + 2 < L) clip(after, after + 1, after + 2);
  if (after + 3 < L) clip(after + 1, after + 2, after + 3);
  for (int v : word) out.reset(std::size_t(v));
  return out;
}

std::vector<int> sequence_vertices(const Hypergraph4& h,
                                   const TypicalityTables& tables,
                                   const std::array<int, 3>& t_from,
                                   const std::array<int, 3>& t_to,
                                   const std::vector<int>& interior,
                                   double e1, double e2, double e3,
                                   std::mt19937_64& rng) {
  (void)h;
  const int m = int(interior.size());
  {
    std::vector<int> all = triple_vec(t_from);
    all.insert(all.end(), interior.begin(), interior.end());
    all.insert(all.end(), t_to.begin(), t_to.end());
    std::vector<int> s = all;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      fail(Err::out_of_range, "sequencing vertices repeat");
  }
  auto wt = [&](int x, int y, int z) {
    return tables.window_typical(x, y, z, e1, e2, e3);
  };
  auto assemble = [&](const std::vector<int>& mid) {
    std::vector<int> w = triple_vec(t_from);
    w.insert(w.end(), mid.begin(), mid.end());
    w.insert(w.end(), t_to.begin(), t_to.end());
    return w;
  };
  auto word_ok = [&](const std::vector<int>& w) {
    for (std::size_t i = 0; i + 2 < w.size(); ++i)
      if (!wt(w[i], w[i + 1], w[i + 2])) return false;
    return true;
  };
  auto brute = [&]() -> std::vector<int> {
    std::vector<int> mid = interior;
    std::sort(mid.begin(), mid.end());
    do {
      std::vector<int> w = assemble(mid);
      if (word_ok(w)) return w;
    } while (std::next_permutation(mid.begin(), mid.end()));
    fail(Err::search_exhausted,
         "no typical ordering of " + std::to_string(m) + " interior vertices");
  };
  if (m <= 2) return brute();

  // Auxiliary 3-graph on the interior plus one junction vertex carrying the
  // boundary information. Ids 0..m-1 are interior; id m stands for the
  // innermost boundary vertex on the from side.
  const int x1 = t_from[1], x2 = t_from[2];
  const int x2p = t_to[0], x1p = t_to[1];
  std::vector<char> as_first(std::size_t(m), 0), as_last(std::size_t(m), 0);
  for (int u = 0; u < m; ++u) {
    as_first[std::size_t(u)] = char(wt(x1, x2, interior[std::size_t(u)]));
    as_last[std::size_t(u)] = char(wt(x1p, x2p, interior[std::size_t(u)]));
  }
  Graph3 g{m + 1};
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k)
        if (wt(interior[std::size_t(i)], interior[std::size_t(j)],
               interior[std::size_t(k)]))
          g.add_edge(i, j, k);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v) {
      const int vu = interior[std::size_t(u)], vv = interior[std::size_t(v)];
      // Symmetric part holds near the junction in either direction; the
      // directed parts decide which cut orientation is usable.
      if (!wt(x2, vu, vv) || !wt(vu, vv, x2p)) continue;
      const bool uv = as_first[std::size_t(u)] && as_last[std::size_t(v)];
      const bool vu_dir = as_first[std::size_t(v)] && as_last[std::size_t(u)];
      if (uv || vu_dir) g.add_edge(u, v, m);
    }
  std::vector<int> cyc;
  try {
    cyc = dense3_hamiltonian_cycle(g, rng());
  } catch (const Error&) {
    if (m <= 8) return brute();
    throw;
  }
  std::size_t start = 0;
  while (cyc[start] != m) ++start;
  std::vector<int> rot;
  rot.reserve(cyc.size());
  for (std::size_t i = 0; i < cyc.size(); ++i)
    rot.push_back(cyc[(start + i) % cyc.size()]);
  std::vector<int> mid;
  mid.reserve(std::size_t(m));
  for (std::size_t i = 1; i < rot.size(); ++i)
    mid.push_back(interior[std::size_t(rot[i])]);
  const int p = rot[1], q = rot[std::size_t(m)];
  if (as_first[std::size_t(p)] && as_last[std::size_t(q)]) {
    // keep orientation
  } else if (as_first[std::size_t(q)] && as_last[std::size_t(p)]) {
    std::reverse(mid.begin(), mid.end());
  } else {
    fail(Err::construction_failed, "junction edge lost both orientations");
  }
  std::vector<int> w = assemble(mid);
  if (!word_ok(w))
    fail(Err::construction_failed, "sequenced word failed its window check");
  return w;
}

Sequencing sequence_through(const Hypergraph4& h, const Partition& part,
                            const SolverParams& params,
                            const std::array<int, 3>& t_from,
                            const std::array<int, 3>& t_to,
                            const std::vector<int>& interior) {
  params.validate();
  const double half = part.n() / 2.0;
  const std::array<double, 3> sc = seq_scale(params);
  if (double(interior.size()) < params.seq_c * half)
    fail(Err::hypothesis_violated,
         "interior of " + std::to_string(interior.size()) + " below c*n = " +
             std::to_string(params.seq_c * half));
  if (!interior.empty() && !same_side(part, interior, part.in_a(interior[0])))
    fail(Err::hypothesis_violated, "interior spans both sides");
  TypicalityTables tables = build_tables(h, part);
  for (int v : interior)
    if (!tables.vertex_passes(v, sc[0]))
      fail(Err::hypothesis_violated,
           "interior vertex " + std::to_string(v) + " fails the vertex test");
  if (!tables.window_typical(t_from[0], t_from[1], t_from[2], sc[0], sc[1],
                             sc[2]) ||
      !tables.window_typical(t_to[0], t_to[1], t_to[2], sc[0], sc[1], sc[2]))
    fail(Err::hypothesis_violated, "boundary triple not typical at scale");
  trace_line(params, "seq c=" + std::to_string(params.seq_c) + " m=" +
                         std::to_string(interior.size()));
  std::mt19937_64 rng{std::uint64_t(params.rng_seed)};
  Sequencing s;
  s.order = sequence_vertices(h, tables, t_from, t_to, interior, sc[0], sc[1],
                              sc[2], rng);
  return s;
}

namespace {

// Splices a connector between `word` (kept wholesale) and `tail`, where the
// connector's first three vertices equal the last three of `word` and its
// last three equal the first three of `tail`.
std::vector<int> glue(const std::vector<int>& word,
                      const std::vector<int>& conn,
                      const std::vector<int>& tail) {
  std::vector<int> out = word;
  out.insert(out.end(), conn.begin() + 3, conn.end() - 3);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

std::array<int, 3> front3(const std::vector<int>& p) {
  return {p[0], p[1], p[2]};
}
std::array<int, 3> back3(const std::vector<int>& p) {
  const std::size_t k = p.size();
  return {int(p[k - 3]), int(p[k - 2]), int(p[k - 1])};
}

// Last resort when the capped connector cannot dodge a grown path: bounded
// DFS over words of length 7 to 12 whose every window is an edge with
// exactly one minority vertex and whose interior avoids the full working
// set. The word needs no typicality, so the cap does not apply.
std::vector<int> local_connect_word(const Hypergraph4& h,
                                    const Partition& part,
                                    const DynBitset& blocked_full,
                                    const std::array<int, 3>& from,
                                    const std::array<int, 3>& to,
                                    std::mt19937_64& rng) {
  const int n = h.vertex_count();
  int from_a = 0;
  for (int v : from) from_a += part.in_a(v) ? 1 : 0;
  const int target = from_a >= 2 ? 3 : 1;
  std::vector<char> held(std::size_t(n), 0);
  for (int v : from) held[std::size_t(v)] = 1;
  for (int v : to) held[std::size_t(v)] = 1;
  std::vector<int> cand;
  for (int v = 0; v < n; ++v)
    if (!blocked_full.test(std::size_t(v)) && !held[std::size_t(v)])
      cand.push_back(v);
  std::shuffle(cand.begin(), cand.end(), rng);
  for (int len = 7; len <= 12; ++len) {
    std::vector<int> seq(std::size_t(len), -1);
    for (int i = 0; i < 3; ++i) {
      seq[std::size_t(i)] = from[std::size_t(i)];
      seq[std::size_t(len - 3 + i)] = to[std::size_t(i)];
    }
    std::vector<char> used = held;
    long long nodes = 200000;
    auto wedge = [&](int s) {
      int am = 0;
      for (int i = s; i < s + 4; ++i)
        am += part.in_a(seq[std::size_t(i)]) ? 1 : 0;
      if (am != target) return false;
      return h.has_edge(make_edge(seq[std::size_t(s)], seq[std::size_t(s + 1)],
                                  seq[std::size_t(s + 2)],
                                  seq[std::size_t(s + 3)]));
    };
    const int last = len - 4;
    std::function<bool(int)> place = [&](int g) -> bool {
      if (g > last) return true;
      for (int v : cand) {
        if (used[std::size_t(v)]) continue;
        if (--nodes < 0) return false;
        seq[std::size_t(g)] = v;
        used[std::size_t(v)] = 1;
        bool ok = wedge(g - 3);
        if (ok && g == last)
          ok = wedge(len - 6) && wedge(len - 5) && wedge(len - 4);
        if (ok && place(g + 1)) return true;
        used[std::size_t(v)] = 0;
        seq[std::size_t(g)] = -1;
        if (nodes < 0) return false;
      }
      return false;
    };
    if (place(3)) return seq;
  }
  return {};
}

// The connector caps its avoid set at a third of the vertex count, the
// smallness its sampling argument rests on. A grown path can exceed that
// cap, so this sends a sampled subset and rejects any returned word that
// collides with the full working set.
TightPath connect_guarded(const Hypergraph4& h, const Partition& part,
                          const SolverParams& params,
                          const std::array<int, 3>& from,
                          const std::array<int, 3>& to, const DynBitset& used,
                          const DynBitset& blocked, std::mt19937_64& rng) {
  const int n = part.n();
  const int cap = 2 * (n / 2) / 3;
  DynBitset full = used;
  full |= blocked;
  for (int v : from) full.reset(std::size_t(v));
  for (int v : to) full.reset(std::size_t(v));
  std::vector<int> pool = full.to_vector();
  const bool small = int(pool.size()) <= cap;
  Error last{Err::construction_failed, "connector never attempted"};
  auto try_local = [&]() -> TightPath {
    std::vector<int> word = local_connect_word(h, part, full, from, to, rng);
    if (word.empty()) return TightPath{};
    TightPath path{word};
    const VerifyResult vr = verify_tight_path(h, path);
    if (vr.ok) return path;
    last = Error(Err::construction_failed, "local word broke: " + vr.reason);
    return TightPath{};
  };
  auto try_connector = [&](int attempts) -> TightPath {
    for (int attempt = 0; attempt < attempts; ++attempt) {
      ConnectorRequest req;
      req.triple_from = from;
      req.triple_to = to;
      req.params = params;
      if (small) {
        req.avoid = pool;
      } else {
        // hard-blocked vertices always make the cut, the rest is resampled
        std::shuffle(pool.begin(), pool.end(), rng);
        std::stable_partition(pool.begin(), pool.end(), [&](int v) {
          return blocked.test(std::size_t(v));
        });
        req.avoid.assign(pool.begin(), pool.begin() + cap);
      }
      TightPath conn;
      try {
        conn = connect_triples(h, part, req, rng);
      } catch (const Error& e) {
        last = e;
        continue;
      }
      bool clash = false;
      for (std::size_t i = 3; i + 3 < conn.seq.size(); ++i)
        if (full.test(std::size_t(conn.seq[i]))) {
          clash = true;
          break;
        }
      if (!clash) return conn;
      last =
          Error(Err::construction_failed, "connector reused a path vertex");
    }
    return TightPath{};
  };
  if (small) {
    // The full avoid set fits the cap, so the connector word cannot collide
    // and is the principled choice. The local search only mops up.
    TightPath conn = try_connector(2);
    if (!conn.seq.empty()) return conn;
    conn = try_local();
    if (!conn.seq.empty()) return conn;
  } else {
    // Over the cap the connector hypothesis is already broken and its words
    // run long; the short local word conserves scarce vertices.
    TightPath conn = try_local();
    if (!conn.seq.empty()) return conn;
    conn = try_connector(4);
    if (!conn.seq.empty()) return conn;
  }
  fail(last.code(), std::string("guarded connector: ") + last.what());
}

// Extends one end of path to a fresh typical one-sided triple. Returns the
// extended path; used is updated with the new vertices.
std::vector<int> finish_end(const Hypergraph4& h, const Partition& part,
                            const TypicalityTables& tables,
                            const SolverParams& params, std::vector<int> path,
                            bool at_front, DynBitset& used,
                            const DynBitset& blocked, std::mt19937_64& rng) {
  const std::array<double, 3> sc{params.eps1, params.eps2, params.eps3};
  DynBitset pool{std::size_t(part.n())};
  for (int v = 0; v < part.n(); ++v)
    if (part.in_a(v) == at_front && !used.test(std::size_t(v)) &&
        !blocked.test(std::size_t(v)))
      pool.set(std::size_t(v));
  Error last{Err::construction_failed, "end extension never attempted"};
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::array<int, 3> t;
    try {
      t = find_typical_triple(h, tables, pool, sc[0], sc[1], sc[2], rng);
    } catch (const Error& e) {
      last = e;
      break;
    }
    const std::array<int, 3> from = at_front ? t : back3(path);
    const std::array<int, 3> to = at_front ? front3(path) : t;
    try {
      TightPath conn = connect_guarded(h, part, params, from, to, used,
                                       blocked, rng);
      for (int v : conn.seq) used.set(std::size_t(v));
      if (at_front) {
        std::vector<int> out = conn.seq;
        out.insert(out.end(), path.begin() + 3, path.end());
        return out;
      }
      std::vector<int> out = path;
      out.insert(out.end(), conn.seq.begin() + 3, conn.seq.end());
      return out;
    } catch (const Error& e) {
      last = e;
      for (int v : t) pool.reset(std::size_t(v));
    }
  }
  fail(last.code(), std::string("end extension: ") + last.what());
}

}  // namespace

Bridge build_bridge(const Hypergraph4& h, const Partition& part,
                    const SolverParams& params, const BridgeOptions& opt,
                    std::mt19937_64& rng) {
  params.validate();
  const int N = part.n();
  TypicalityTables tables = build_tables(h, part);
  const std::array<double, 3> sc{params.eps1, params.eps2, params.eps3};
  DynBitset avoid = to_bits(N, opt.avoid);
  if (opt.required_interior >= 0 &&
      avoid.test(std::size_t(opt.required_interior)))
    fail(Err::out_of_range, "required interior vertex sits in the avoid set");
  std::vector<int> a_pool, b_pool;
  for (int v = 0; v < N; ++v) {
    if (avoid.test(std::size_t(v))) continue;
    if (!tables.vertex_passes(v, params.eps1)) continue;
    (part.in_a(v) ? a_pool : b_pool).push_back(v);
  }
  if (a_pool.size() < 2 || b_pool.size() < 2)
    fail(Err::construction_failed, "typical pools too small for a bridge");

  std::string last_stage = "pair draw";
  auto wok = [&](int x, int y, int z) {
    return tables.window_typical(x, y, z, sc[0], sc[1], sc[2]);
  };
  for (int attempt = 0; attempt < params.connector_retry_budget; ++attempt) {
    std::uniform_int_distribution<std::size_t> pa(0, a_pool.size() - 1);
    std::uniform_int_distribution<std::size_t> pb(0, b_pool.size() - 1);
    const int a1 = a_pool[pa(rng)], a2 = a_pool[pa(rng)];
    const int b1 = b_pool[pb(rng)], b2 = b_pool[pb(rng)];
    if (a1 == a2 || b1 == b2) continue;
    if (!tables.pair_typical(a1, a2, params.eps2)) {
      last_stage = "typical top pair";
      continue;
    }
    if (!tables.pair_typical(b1, b2, params.eps2)) {
      last_stage = "typical bottom pair";
      continue;
    }
    std::vector<int> core;
    bool z_branch = false;
    DynBitset core_avoid = avoid;
    for (int v : {a1, a2, b1, b2}) core_avoid.set(std::size_t(v));
    if (opt.required_interior < 0 && h.has_edge(a1, a2, b1, b2)) {
      // Crossing quadruple present: x a2 a1 b1 b2 y.
      DynBitset xs = h.neighborhood(a2, a1, b1);
      xs -= core_avoid;
      int x = -1;
      for (int v : ranked_candidates(
               xs, [&](int v2) { return part.in_a(v2) && wok(v2, a2, a1); },
               rng)) {
        if (part.in_a(v)) {
          x = v;
          break;
        }
      }
      if (x < 0) {
        last_stage = "direct left end";
        continue;
      }
      core_avoid.set(std::size_t(x));
      DynBitset ys = h.neighborhood(a1, b1, b2);
      ys -= core_avoid;
      int y = -1;
      for (int v : ranked_candidates(
               ys, [&](int v2) { return !part.in_a(v2) && wok(b1, b2, v2); },
               rng)) {
        if (!part.in_a(v)) {
          y = v;
          break;
        }
      }
      if (y < 0) {
        last_stage = "direct right end";
        continue;
      }
      core = {x, a2, a1, b1, b2, y};
    } else {
      // Route through the shared neighborhood of the two mixed triples; the
      // codegree bound keeps it nonempty.
      DynBitset zs = h.neighborhood(a1, a2, b1);
      zs &= h.neighborhood(a1, b1, b2);
      zs -= core_avoid;
      int z = -1;
      if (opt.required_interior >= 0) {
        if (zs.test(std::size_t(opt.required_interior)))
          z = opt.required_interior;
        else {
          last_stage = "required interior unreachable";
          continue;
        }
      } else {
        std::vector<int> zv = zs.to_vector();
        if (zv.empty()) {
          last_stage = "empty shared neighborhood";
          continue;
        }
        std::uniform_int_distribution<std::size_t> pz(0, zv.size() - 1);
        z = zv[pz(rng)];
      }
      core_avoid.set(std::size_t(z));
      z_branch = true;
      const bool za = part.in_a(z);
      // x side is forced by the window {x,a2,a1,z}: opposite of z.
      DynBitset xs = h.neighborhood(a2, a1, z);
      xs -= core_avoid;
      int x = -1;
      for (int v : ranked_candidates(
               xs,
               [&](int v2) {
                 return part.in_a(v2) != za &&
                        (za || wok(v2, a2, a1));
               },
               rng)) {
        if (part.in_a(v) != za) {
          x = v;
          break;
        }
      }
      if (x < 0) {
        last_stage = "shared-route left end";
        continue;
      }
      core_avoid.set(std::size_t(x));
      DynBitset ys = h.neighborhood(z, b1, b2);
      ys -= core_avoid;
      int y = -1;
      for (int v : ranked_candidates(
               ys,
               [&](int v2) { return !part.in_a(v2) && wok(b1, b2, v2); },
               rng)) {
        y = v;
        break;
      }
      if (y < 0) {
        last_stage = "shared-route right end";
        continue;
      }
      core = {x, a2, a1, z, b1, b2, y};
    }
    DynBitset used = to_bits(N, core);
    std::vector<int> path = core;
    try {
      if (!(same_side(part, triple_vec(front3(path)), true) &&
            wok(path[0], path[1], path[2])))
        path = finish_end(h, part, tables, params, path, true, used, avoid,
                          rng);
      if (!(same_side(part, triple_vec(back3(path)), false) &&
            wok(path[path.size() - 3], path[path.size() - 2],
                path[path.size() - 1])))
        path = finish_end(h, part, tables, params, path, false, used, avoid,
                          rng);
    } catch (const Error& e) {
      last_stage = std::string("end extension: ") + e.what();
      continue;
    }
    if (int(path.size()) > 25) {
      last_stage = "size cap";
      continue;
    }
    TightPath tp{path};
    const VerifyResult vr = verify_tight_path(h, tp);
    if (!vr.ok) fail(Err::construction_failed, "bridge windows: " + vr.reason);
    for (int v : path)
      if (avoid.test(std::size_t(v)))
        fail(Err::construction_failed, "bridge touched the avoid set");
    Bridge br;
    br.path = tp;
    br.end_aaa = front3(path);
    br.end_bbb = back3(path);
    br.difference = side_difference(part, path);
    br.z_branch = z_branch;
    trace_line(params,
               "bridge size=" + std::to_string(path.size()) + " diff=" +
                   std::to_string(br.difference) +
                   (z_branch ? " branch=shared" : " branch=direct"));
    return br;
  }
  fail(Err::construction_failed,
       "bridge search exhausted " +
           std::to_string(params.connector_retry_budget) +
           " attempts, last stage: " + last_stage);
}

Bridge build_bridge(const Hypergraph4& h, const Partition& part,
                    const SolverParams& params, const std::vector<int>& K,
                    std::mt19937_64& rng) {
  BridgeOptions opt;
  opt.avoid = K;
  return build_bridge(h, part, params, opt, rng);
}

std::pair<Bridge, Bridge> build_disjoint_bridges(const Hypergraph4& h,
                                                 const Partition& part,
                                                 const SolverParams& params,
                                                 std::mt19937_64& rng) {
  params.validate();
  if (part.n() < params.min_solver_n)
    fail(Err::construction_failed,
         "instance below min_solver_n, no room for two bridges");
  Bridge m1 = build_bridge(h, part, params, std::vector<int>{}, rng);
  Bridge m2 = build_bridge(h, part, params, m1.path.seq, rng);
  return {m1, m2};
}

AbsorberPath absorb_medium(const Hypergraph4& h, const Partition& part,
                           const SolverParams& params, const Bridge& m,
                           const std::vector<int>& exempt,
                           std::mt19937_64& rng) {
  params.validate();
  const int N = part.n();
  const double half = N / 2.0;
  TypicalityTables tables = build_tables(h, part);
  const std::array<double, 3> sc{params.eps1, params.eps2, params.eps3};
  const VerifyResult v0 = verify_tight_path(h, m.path);
  if (!v0.ok) fail(Err::construction_failed, "bridge input: " + v0.reason);

  DynBitset used = to_bits(N, m.path.seq);
  DynBitset exempt_bits = to_bits(N, exempt);
  DynBitset anarch{std::size_t(N)};
  std::vector<int> meds;
  for (int v = 0; v < N; ++v) {
    const VertexClass c = tables.vertex_class(v, params.eps5);
    if (c.kind == VertexKind::anarchist) anarch.set(std::size_t(v));
    if (c.kind == VertexKind::medium && !used.test(std::size_t(v)) &&
        !exempt_bits.test(std::size_t(v)))
      meds.push_back(v);
  }
  const double budget = std::max(2.0, params.eps4 * half);
  if (double(meds.size()) > budget)
    fail(Err::too_many_mediums,
         std::to_string(meds.size()) + " mediums exceed budget " +
             std::to_string(budget));
  DynBitset med_bits = to_bits(N, meds);

  std::vector<std::array<int, 7>> abs_a, abs_b;
  for (int z : meds) {
    const bool za = part.in_a(z);
    // Typical sub-link: triples T with T+z an edge, one vertex opposite z,
    // and T window-typical, over untouched vertices only.
    std::vector<int> fverts;
    std::vector<int> fidx(std::size_t(N), -1);
    for (int v = 0; v < N; ++v)
      if (!used.test(std::size_t(v)) && !anarch.test(std::size_t(v)) &&
          !med_bits.test(std::size_t(v)) && !exempt_bits.test(std::size_t(v))) {
        fidx[std::size_t(v)] = int(fverts.size());
        fverts.push_back(v);
      }
    const int fm = int(fverts.size());
    if (fm < 6)
      fail(Err::construction_failed, "absorber pool too small for vertex " +
                                         std::to_string(z));
    Graph3 f{fm};
    for (const Edge4& e : h.edges()) {
      int zi = -1;
      for (int i = 0; i < 4; ++i)
        if (e[std::size_t(i)] == z) zi = i;
      if (zi < 0) continue;
      int t[3], w = 0, in_a = 0;
      bool ok = true;
      for (int i = 0; i < 4; ++i) {
        if (i == zi) continue;
        const int v = e[std::size_t(i)];
        if (fidx[std::size_t(v)] < 0) {
          ok = false;
          break;
        }
        t[w++] = v;
        in_a += part.in_a(v);
      }
      if (!ok) continue;
      if (in_a != (za ? 2 : 1)) continue;
      if (!tables.window_typical(t[0], t[1], t[2], sc[0], sc[1], sc[2]))
        continue;
      f.add_edge(fidx[std::size_t(t[0])], fidx[std::size_t(t[1])],
                 fidx[std::size_t(t[2])]);
    }
    if (f.edge_count() == 0)
      fail(Err::construction_failed,
           "empty typical sub-link for vertex " + std::to_string(z));
    const double density =
        double(f.edge_count()) / double(choose(std::uint64_t(fm), 3));
    std::vector<int> fpath = greedy_dense_path(
        f, std::clamp(0.9 * density, 1e-9, 1.0), rng());
    if (int(fpath.size()) < 6)
      fail(Err::construction_failed,
           "sub-link path of " + std::to_string(fpath.size()) +
               " vertices cannot host vertex " + std::to_string(z));
    std::vector<int> y;
    y.reserve(fpath.size());
    for (int id : fpath) y.push_back(fverts[std::size_t(id)]);
    // Prefer the minority vertex at offsets 2 and 5 so the unit reads as
    // two mirrored typical triples around z.
    int off = 0;
    for (int o = 0; o + 6 <= int(y.size()); ++o)
      if (part.in_a(y[std::size_t(o + 2)]) != za) {
        off = o;
        break;
      }
    std::array<int, 7> unit{y[std::size_t(off)],     y[std::size_t(off + 1)],
                            y[std::size_t(off + 2)], z,
                            y[std::size_t(off + 3)], y[std::size_t(off + 4)],
                            y[std::size_t(off + 5)]};
    const VerifyResult vu =
        verify_tight_path(h, TightPath{std::vector<int>(unit.begin(), unit.end())});
    if (!vu.ok)
      fail(Err::construction_failed, "absorber unit windows: " + vu.reason);
    for (int v : unit) used.set(std::size_t(v));
    med_bits.reset(std::size_t(z));
    (za ? abs_a : abs_b).push_back(unit);
  }

  // Chain: top-side units onto the front, bottom-side onto the back, then
  // finish both ends with fresh typical triples.
  std::vector<int> q = m.path.seq;
  const std::size_t bridge_len = q.size();
  DynBitset blocked = anarch;
  for (int v : exempt_bits.to_vector()) blocked.set(std::size_t(v));
  auto chain = [&](const std::array<int, 7>& unit, bool at_front) {
    std::vector<int> u(unit.begin(), unit.end());
    for (int orient = 0; orient < 2; ++orient) {
      const std::array<int, 3> from = at_front ? back3(u) : back3(q);
      const std::array<int, 3> to = at_front ? front3(q) : front3(u);
      try {
        TightPath conn =
            connect_guarded(h, part, params, from, to, used, blocked, rng);
        for (int v : conn.seq) used.set(std::size_t(v));
        q = at_front ? glue(u, conn.seq, q) : glue(q, conn.seq, u);
        return;
      } catch (const Error&) {
        std::reverse(u.begin(), u.end());
      }
    }
    fail(Err::construction_failed,
         "could not chain the absorber of vertex " + std::to_string(unit[3]));
  };
  for (const auto& unit : abs_a) chain(unit, true);
  for (const auto& unit : abs_b) chain(unit, false);
  auto wok = [&](int x, int y2, int z2) {
    return tables.window_typical(x, y2, z2, sc[0], sc[1], sc[2]);
  };
  if (!(same_side(part, triple_vec(front3(q)), true) && wok(q[0], q[1], q[2])))
    q = finish_end(h, part, tables, params, q, true, used, blocked, rng);
  if (!(same_side(part, triple_vec(back3(q)), false) &&
        wok(q[q.size() - 3], q[q.size() - 2], q[q.size() - 1])))
    q = finish_end(h, part, tables, params, q, false, used, blocked, rng);

  if (double(q.size()) > params.q_cap_frac * N)
    fail(Err::construction_failed,
         "path of " + std::to_string(q.size()) + " vertices exceeds cap " +
             std::to_string(params.q_cap_frac * N));
  const VerifyResult vq = verify_tight_path(h, TightPath{q});
  if (!vq.ok) fail(Err::construction_failed, "chained path: " + vq.reason);
  // Locate the bridge inside q to bound the added end words.
  int at = -1;
  for (std::size_t i = 0; i + bridge_len <= q.size(); ++i)
    if (std::equal(m.path.seq.begin(), m.path.seq.end(), q.begin() + long(i))) {
      at = int(i);
      break;
    }
  if (at < 0) fail(Err::construction_failed, "bridge lost during chaining");
  check_window_masses(part, q, 0, at, 3);
  check_window_masses(part, q, at + int(bridge_len) - 3,
                      int(q.size()) - 3, 1);
  for (int v : meds)
    if (!std::count(q.begin(), q.end(), v))
      fail(Err::construction_failed,
           "medium vertex " + std::to_string(v) + " missing from the path");
  trace_line(params, "absorb mediums=" + std::to_string(meds.size()) +
                         " units=" + std::to_string(abs_a.size() + abs_b.size()) +
                         " q=" + std::to_string(q.size()));
  AbsorberPath out;
  out.path = TightPath{q};
  out.bridge = m;
  out.mediums = meds;
  out.absorbers = abs_a;
  out.absorbers.insert(out.absorbers.end(), abs_b.begin(), abs_b.end());
  return out;
}

AbsorberPath absorb_medium(const Hypergraph4& h, const Partition& part,
                           const SolverParams& params, const Bridge& m,
                           std::mt19937_64& rng) {
  return absorb_medium(h, part, params, m, std::vector<int>{}, rng);
}

Partition transfer_anarchists(const Hypergraph4& h, const Partition& part,
                              const SolverParams& params) {
  params.validate();
  const int N = part.n();
  const double half = N / 2.0;
  TypicalityTables tables = build_tables(h, part);
  std::vector<int> movers;
  DynBitset was_medium{std::size_t(N)};
  for (int v = 0; v < N; ++v) {
    const VertexClass c = tables.vertex_class(v, params.eps5);
    if (c.kind == VertexKind::anarchist) movers.push_back(v);
    if (c.kind == VertexKind::medium) was_medium.set(std::size_t(v));
  }
  const double budget = 5.0 * params.eps0 * half;
  if (double(movers.size()) > budget)
    fail(Err::budget_exceeded, std::to_string(movers.size()) +
                                   " anarchists exceed budget " +
                                   std::to_string(budget));
  Partition out = part;
  for (int v : movers) out = out.with_moved(v);
  const double relaxed = std::min(1.0, 4.0 * params.eps5);
  TypicalityTables after = build_tables(h, out);
  for (int v = 0; v < N; ++v) {
    if (after.vertex_passes(v, relaxed)) continue;
    if (was_medium.test(std::size_t(v))) continue;  // absorbed, rides inside Q
    fail(Err::reclassification_failed,
         "vertex " + std::to_string(v) + " still atypical at scale " +
             std::to_string(relaxed) + " after the transfer");
  }
  const double drift = std::fabs(double(out.a_size()) - half);
  if (drift > 5.0 * params.eps0 * half)
    fail(Err::envelope_violated,
         "side size " + std::to_string(out.a_size()) + " drifted " +
             std::to_string(drift) + " from " + std::to_string(half));
  trace_line(params, "transfer moved=" + std::to_string(movers.size()));
  return out;
}

std::vector<int> extend_exhaustive(const Hypergraph4& h,
                                   const std::vector<int>& start,
                                   const std::vector<int>& leftover,
                                   bool close_cycle, long long node_budget,
                                   std::mt19937_64& rng) {
  if (start.size() < 3)
    fail(Err::out_of_range, "seed path needs at least 3 vertices");
  const int N = h.vertex_count();
  std::deque<int> cur(start.begin(), start.end());
  DynBitset unused = to_bits(N, leftover);
  for (int v : start)
    if (unused.test(std::size_t(v)))
      fail(Err::out_of_range, "leftover overlaps the seed path");
  std::size_t remaining = leftover.size();
  long long nodes = 0;
  bool out_of_budget = false;
  auto order_of = [&](const DynBitset& cand) {
    std::vector<int> v = cand.to_vector();
    std::shuffle(v.begin(), v.end(), rng);
    return v;
  };
  std::function<bool()> rec = [&]() -> bool {
    if (remaining == 0) {
      if (!close_cycle) return true;
      const std::size_t k = cur.size();
      return h.has_edge(cur[k - 3], cur[k - 2], cur[k - 1], cur[0]) &&
             h.has_edge(cur[k - 2], cur[k - 1], cur[0], cur[1]) &&
             h.has_edge(cur[k - 1], cur[0], cur[1], cur[2]);
    }
    if (++nodes > node_budget) {
      out_of_budget = true;
      return false;
    }
    const std::size_t k = cur.size();
    DynBitset back_cand = h.neighborhood(cur[k - 3], cur[k - 2], cur[k - 1]);
    back_cand &= unused;
    DynBitset front_cand = h.neighborhood(cur[2], cur[1], cur[0]);
    front_cand &= unused;
    const bool back_first = (rng() & 1) != 0;
    for (int side = 0; side < 2; ++side) {
      const bool at_back = (side == 0) == back_first;
      for (int v : order_of(at_back ? back_cand : front_cand)) {
        if (at_back)
          cur.push_back(v);
        else
          cur.push_front(v);
        unused.reset(std::size_t(v));
        --remaining;
        if (rec()) return true;
        ++remaining;
        unused.set(std::size_t(v));
        if (at_back)
          cur.pop_back();
        else
          cur.pop_front();
        if (out_of_budget) return false;
      }
    }
    return false;
  };
  if (rec()) return std::vector<int>(cur.begin(), cur.end());
  return {};
}

EndingShape ending_shape(int m1, int m2) {
  const int d = 3 * m1 - m2;
  if (d < 2)
    fail(Err::envelope_violated,
         "top side too thin: 3*m1-m2 = " + std::to_string(d));
  static const int es[8] = {2, 0, 0, 1, 1, 1, 2, 2};
  static const int taus[8] = {0, 1, 0, 2, 1, 0, 2, 1};
  EndingShape c;
  c.t = (d + 7) / 8;
  c.e = es[d % 8];
  c.tau = taus[d % 8];
  if (d != 8 * c.t - 6 + 3 * c.e - c.tau)
    fail(Err::construction_failed, "ending table broke its own identity");
  return c;
}

namespace {

std::vector<int> spliced(const std::vector<int>& word,
                         const std::vector<int>& at,
                         const std::vector<int>& ins) {
  std::vector<int> extra(word.size(), -1);
  for (std::size_t i = 0; i < at.size(); ++i)
    extra[std::size_t(at[i])] = ins[i];
  std::vector<int> out;
  out.reserve(word.size() + ins.size());
  for (std::size_t i = 0; i < word.size(); ++i) {
    out.push_back(word[i]);
    if (extra[i] >= 0) out.push_back(extra[i]);
  }
  return out;
}

// Runs the sequencing engine over all orientations of the target triple.
std::vector<int> sequence_toward(const Hypergraph4& h,
                                 const TypicalityTables& tables,
                                 const std::array<int, 3>& from,
                                 std::array<int, 3> to,
                                 const std::vector<int>& interior,
                                 const std::array<double, 3>& sc,
                                 std::mt19937_64& rng) {
  std::sort(to.begin(), to.end());
  Error last{Err::search_exhausted, "no orientation attempted"};
  do {
    try {
      return sequence_vertices(h, tables, from, to, interior, sc[0], sc[1],
                               sc[2], rng);
    } catch (const Error& e) {
      last = e;
    }
  } while (std::next_permutation(to.begin(), to.end()));
  fail(last.code(), last.what());
}

TightPath complete_impl(const Hypergraph4& h, const Partition& part,
                        const SolverParams& params, std::vector<int> q,
                        std::mt19937_64& rng) {
  const int N = part.n();
  const double half = N / 2.0;
  TypicalityTables tables = build_tables(h, part);
  DynBitset used = to_bits(N, q);
  std::vector<int> a_left, b_left;
  for (int v = 0; v < N; ++v) {
    if (used.test(std::size_t(v))) continue;
    (part.in_a(v) ? a_left : b_left).push_back(v);
  }
  const int m1 = int(a_left.size()), m2 = int(b_left.size());
  trace_line(params,
             "complete m1=" + std::to_string(m1) + " m2=" + std::to_string(m2));

  // Doubled scales: the ends were built before the transfer, so they are
  // re-admitted with slack under the final partition.
  auto end_ok = [&](int x, int y, int z, bool a_side) {
    return same_side(part, {x, y, z}, a_side) &&
           tables.window_typical(x, y, z, std::min(1.0, 2 * params.eps1),
                                 std::min(1.0, 2 * params.eps2),
                                 std::min(1.0, 2 * params.eps3));
  };
  if (!end_ok(q[0], q[1], q[2], true))
    fail(Err::hypothesis_violated, "path front no longer typical all-top");
  if (!end_ok(q[q.size() - 3], q[q.size() - 2], q[q.size() - 1], false))
    fail(Err::hypothesis_violated, "path back no longer typical all-bottom");

  std::vector<int> leftovers = a_left;
  leftovers.insert(leftovers.end(), b_left.begin(), b_left.end());
  auto dfs_try = [&](int attempts, long long budget) -> std::vector<int> {
    for (int i = 0; i < attempts; ++i) {
      std::vector<int> r =
          extend_exhaustive(h, q, leftovers, false, budget, rng);
      if (!r.empty()) return r;
    }
    return {};
  };
  auto finish = [&](std::vector<int> full) {
    TightPath tp{std::move(full)};
    if (!is_hamiltonian_certificate(h, tp))
      fail(Err::construction_failed, "final certificate rejected");
    return tp;
  };
  if (m1 + m2 <= 24) {
    std::vector<int> r = dfs_try(6, 4000000);
    if (!r.empty()) return finish(std::move(r));
    fail(Err::construction_failed,
         "exhaustive completion failed on " + std::to_string(m1 + m2) +
             " leftovers");
  }

  try {
    if (double(m2 - m1) > params.envelope_frac * half)
      fail(Err::envelope_violated,
           "side gap " + std::to_string(m2 - m1) + " beyond " +
               std::to_string(params.envelope_frac * half));
    const EndingShape ec = ending_shape(m1, m2);
    if (3 * ec.t > m1)
      fail(Err::construction_failed,
           "top leftovers cannot host " + std::to_string(ec.t) + " insertions");
    const int p1 = (m2 + 3) / 3;
    const int p2 = std::max(int(std::ceil(0.3 * m1)), ec.t + 3);
    if (p2 > m2)
      fail(Err::construction_failed,
           "bottom tail pool " + std::to_string(p2) + " exceeds side " +
               std::to_string(m2));
    const std::array<double, 3> sc = seq_scale(params);

    // Bottom word: everything left on the bottom side, anchored at the
    // path's back triple.
    DynBitset b_bits = to_bits(N, b_left);
    std::array<int, 3> far_b =
        find_typical_triple(h, tables, b_bits, sc[0], sc[1], sc[2], rng);
    std::vector<int> b_interior;
    for (int v : b_left)
      if (v != far_b[0] && v != far_b[1] && v != far_b[2])
        b_interior.push_back(v);
    const std::vector<int> wb = sequence_toward(
        h, tables, back3(q), far_b, b_interior, sc, rng);

    // Degree filter: which top vertices splice into many bottom slots.
    DynBitset a_bits = to_bits(N, a_left);
    std::vector<int> degree(std::size_t(N), 0);
    int min_slot = N;
    for (int s = 0; s < p1; ++s) {
      const DynBitset cand = insertion_candidates(h, wb, 3 * s + 2, a_bits);
      min_slot = std::min(min_slot, int(cand.count()));
      cand.for_each([&](std::size_t v) { degree[v] += 1; });
    }
    std::vector<int> a_big, a_small;
    for (int v : a_left)
      (double(degree[std::size_t(v)]) >= 0.9 * p1 ? a_big : a_small).push_back(v);
    trace_line(params, "gamma slots=" + std::to_string(p1) + " min_slot=" +
                           std::to_string(min_slot) + " abig=" +
                           std::to_string(a_big.size()));
    if (int(a_small.size()) > 3 * ec.t - 3)
      fail(Err::construction_failed,
           std::to_string(a_small.size()) +
               " low-degree top leftovers exceed " +
               std::to_string(3 * ec.t - 3));
    std::vector<int> a_s = a_small;
    std::shuffle(a_big.begin(), a_big.end(), rng);
    for (int v : a_big)
      if (int(a_s.size()) < 3 * ec.t - 3) a_s.push_back(v);
    DynBitset a_s_bits = to_bits(N, a_s);
    DynBitset far_a_pool{std::size_t(N)};
    for (int v : a_big)
      if (!a_s_bits.test(std::size_t(v))) far_a_pool.set(std::size_t(v));
    std::array<int, 3> far_a;
    try {
      far_a = find_typical_triple(h, tables, far_a_pool, sc[0], sc[1], sc[2],
                                  rng);
    } catch (const Error&) {
      DynBitset wide = a_bits;
      wide -= a_s_bits;
      far_a = find_typical_triple(h, tables, wide, sc[0], sc[1], sc[2], rng);
    }
    const std::array<int, 3> from_a{q[2], q[1], q[0]};
    std::vector<int> wa =
        sequence_toward(h, tables, from_a, far_a, a_s, sc, rng);
    // Keep e of the far triple; the dropped vertices rejoin the zig pool.
    wa.resize(std::size_t(3 * ec.t + ec.e));

    // Match top slots against the tail of the bottom word.
    DynBitset tail_bits{std::size_t(N)};
    for (int i = m2 + 3 - p2; i < m2 + 3; ++i)
      tail_bits.set(std::size_t(wb[std::size_t(i)]));
    std::vector<DynBitset> top_adj;
    std::vector<int> tail_ids = tail_bits.to_vector();
    std::vector<int> tail_idx(std::size_t(N), -1);
    for (std::size_t i = 0; i < tail_ids.size(); ++i)
      tail_idx[std::size_t(tail_ids[i])] = int(i);
    std::vector<int> top_slots;
    for (int s = 0; s < ec.t; ++s) top_slots.push_back(3 * s + 2);
    for (int s : top_slots) {
      const DynBitset cand = insertion_candidates(h, wa, s, tail_bits);
      DynBitset row{tail_ids.size()};
      cand.for_each(
          [&](std::size_t v) { row.set(std::size_t(tail_idx[v])); });
      top_adj.push_back(row);
    }
    const std::vector<int> top_match = kuhn_matching(top_adj, int(tail_ids.size()));
    std::vector<int> top_ins;
    for (int s = 0; s < ec.t; ++s) {
      if (top_match[std::size_t(s)] < 0)
        fail(Err::matching_failed,
             "top slot " + std::to_string(s) + " of " + std::to_string(ec.t) +
                 " found no partner in the bottom tail");
      top_ins.push_back(tail_ids[std::size_t(top_match[std::size_t(s)])]);
    }
    const std::vector<int> p_top = spliced(wa, top_slots, top_ins);
    const VerifyResult vt = verify_tight_path(h, TightPath{p_top});
    if (!vt.ok) fail(Err::construction_failed, "top word: " + vt.reason);

    // Zig: shorten the bottom word, re-sequence the unmatched tail back on,
    // then splice every leftover top vertex in.
    DynBitset matched{std::size_t(N)};
    for (int v : top_ins) matched.set(std::size_t(v));
    std::vector<int> b2;
    for (int v : tail_ids)
      if (!matched.test(std::size_t(v))) b2.push_back(v);
    std::vector<int> pb1(wb.begin(), wb.begin() + (m2 + 3 - p2));
    DynBitset b2_bits = to_bits(N, b2);
    std::array<int, 3> far_b2 =
        find_typical_triple(h, tables, b2_bits, sc[0], sc[1], sc[2], rng);
    std::vector<int> b2_interior;
    for (int v : b2)
      if (v != far_b2[0] && v != far_b2[1] && v != far_b2[2])
        b2_interior.push_back(v);
    const std::vector<int> reseq = sequence_toward(
        h, tables, back3(pb1), far_b2, b2_interior, sc, rng);
    std::vector<int> zig = pb1;
    zig.insert(zig.end(), reseq.begin() + 3, reseq.end());
    if (int(zig.size()) != m2 + 3 - ec.t)
      fail(Err::construction_failed, "zig word length drifted");
    const int p3 = (m2 + 3 - ec.t - ec.tau) / 3;
    if (3 * p3 + ec.tau != m2 + 3 - ec.t)
      fail(Err::construction_failed, "zig slot arithmetic broke");
    DynBitset abar{std::size_t(N)};
    for (int v : a_left) abar.set(std::size_t(v));
    for (int v : p_top)
      if (abar.test(std::size_t(v))) abar.reset(std::size_t(v));
    if (int(abar.count()) != p3)
      fail(Err::construction_failed,
           "leftover top count " + std::to_string(abar.count()) +
               " does not match " + std::to_string(p3) + " zig slots");
    std::vector<int> abar_ids = abar.to_vector();
    std::vector<int> abar_idx(std::size_t(N), -1);
    for (std::size_t i = 0; i < abar_ids.size(); ++i)
      abar_idx[std::size_t(abar_ids[i])] = int(i);
    std::vector<int> zig_slots;
    for (int s = 0; s < p3; ++s) zig_slots.push_back(3 * s + 2);
    std::vector<DynBitset> zig_adj;
    for (int s : zig_slots) {
      const DynBitset cand = insertion_candidates(h, zig, s, abar);
      DynBitset row{abar_ids.size()};
      cand.for_each(
          [&](std::size_t v) { row.set(std::size_t(abar_idx[v])); });
      zig_adj.push_back(row);
    }
    const std::vector<int> zig_match = kuhn_matching(zig_adj, int(abar_ids.size()));
    std::vector<int> zig_ins;
    for (int s = 0; s < p3; ++s) {
      if (zig_match[std::size_t(s)] < 0)
        fail(Err::matching_failed,
             "zig slot " + std::to_string(s) + " of " + std::to_string(p3) +
                 " found no partner among the top leftovers");
      zig_ins.push_back(abar_ids[std::size_t(zig_match[std::size_t(s)])]);
    }
    const std::vector<int> p_zig = spliced(zig, zig_slots, zig_ins);
    const VerifyResult vz = verify_tight_path(h, TightPath{p_zig});
    if (!vz.ok) fail(Err::construction_failed, "zig word: " + vz.reason);

    std::vector<int> full(p_top.rbegin(), p_top.rend());
    full.insert(full.end(), q.begin() + 3, q.end() - 3);
    full.insert(full.end(), p_zig.begin(), p_zig.end());
    trace_line(params, "complete t=" + std::to_string(ec.t) + " e=" +
                           std::to_string(ec.e) + " tau=" +
                           std::to_string(ec.tau) + " p2=" +
                           std::to_string(p2) + " p3=" + std::to_string(p3));
    return finish(std::move(full));
  } catch (const Error& e) {
    if (e.code() == Err::envelope_violated) throw;
    trace_line(params, std::string("complete fallback after: ") + e.what());
    if (m1 + m2 <= 60) {
      std::vector<int> r = dfs_try(4, 6000000);
      if (!r.empty()) return finish(std::move(r));
    }
    throw;
  }
}

}  // namespace

TightPath complete_path(const Hypergraph4& h, const Partition& part,
                        const SolverParams& params, const AbsorberPath& q) {
  params.validate();
  const VerifyResult v0 = verify_tight_path(h, q.path);
  if (!v0.ok) fail(Err::construction_failed, "input path: " + v0.reason);
  if (q.path.seq.size() < 6)
    fail(Err::too_short, "completion needs both end triples");
  const int N = part.n();
  std::vector<int> seq = q.path.seq;
  DynBitset used = to_bits(N, seq);
  if (int(used.count()) != int(seq.size()))
    fail(Err::construction_failed, "input path repeats a vertex");
  if (int(seq.size()) == N) {
    TightPath tp{seq};
    if (!is_hamiltonian_certificate(h, tp))
      fail(Err::construction_failed, "full-length input fails the certificate");
    return tp;
  }
  // Normalize: front all-top; fewer leftovers on the top side.
  Partition p = part;
  if (!p.in_a(seq[0])) std::reverse(seq.begin(), seq.end());
  int m1 = 0, m2 = 0;
  for (int v = 0; v < N; ++v) {
    if (used.test(std::size_t(v))) continue;
    (p.in_a(v) ? m1 : m2) += 1;
  }
  if (m1 > m2) {
    p = p.swapped();
    std::reverse(seq.begin(), seq.end());
  }
  std::mt19937_64 rng{std::uint64_t(params.rng_seed) ^
                      (0x9e3779b97f4a7c15ull * seq.size())};
  return complete_impl(h, p, params, std::move(seq), rng);
}

namespace {

template <class F>
auto run_stage(const SolverParams& p, const char* name, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    auto r = f();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    trace_line(p, "stage " + std::string(name) + " ok " + std::to_string(ms) +
                      "ms");
    return r;
  } catch (const Error& e) {
    fail(e.code(), std::string(name) + " stage: " + e.what());
  }
}

}  // namespace

TightPath solve_ham_path(const Hypergraph4& h, const SolverParams& params) {
  params.validate();
  const int N = h.vertex_count();
  if (N < params.min_solver_n)
    fail(Err::threshold_not_met,
         "instance of " + std::to_string(N) + " vertices is below the solver minimum");
  const int half = N / 2;
  const int need = half - 1;
  const int d3 = h.min_codegree();
  trace_line(params, "threshold delta3=" + std::to_string(d3) + " need=" +
                         std::to_string(need));
  if (d3 < need)
    fail(Err::threshold_not_met, "codegree " + std::to_string(d3) +
                                     " below the path threshold " +
                                     std::to_string(need));
  const BApproximation b = run_stage(params, "split", [&] {
    return compute_b(h, params.exact_threshold, params.rng_seed);
  });
  const double gate = params.b_gate * std::pow(double(half), 4);
  if (double(b.value) > gate)
    fail(Err::hypothesis_violated, "atypical quadruple count " +
                                       std::to_string(b.value) +
                                       " above the gate " + std::to_string(gate));
  const Partition part = b.partition;
  const SolverParams eff = run_stage(params, "scale", [&] {
    return effective_params(h, part, params);
  });
  const TypicalityReport rep = run_stage(eff, "classify", [&] {
    return classify_all(h, part, eff);
  });
  trace_line(eff, "classify typical=" + std::to_string(rep.typical_count) +
                      " medium=" + std::to_string(rep.medium_count) +
                      " anarchist=" + std::to_string(rep.anarchist_count));
  std::vector<int> anarchists;
  {
    TypicalityTables tables = build_tables(h, part);
    for (int v = 0; v < N; ++v)
      if (tables.vertex_class(v, eff.eps5).kind == VertexKind::anarchist)
        anarchists.push_back(v);
  }
  std::mt19937_64 rng{std::uint64_t(eff.rng_seed)};
  const Bridge m = run_stage(eff, "bridge", [&] {
    return build_bridge(h, part, eff, anarchists, rng);
  });
  const AbsorberPath q = run_stage(eff, "absorb", [&] {
    return absorb_medium(h, part, eff, m, rng);
  });
  const Partition moved = run_stage(eff, "transfer", [&] {
    return transfer_anarchists(h, part, eff);
  });
  TightPath path = run_stage(eff, "complete", [&] {
    return complete_path(h, moved, eff, q);
  });
  if (!is_hamiltonian_certificate(h, path))
    fail(Err::construction_failed, "final certificate rejected");
  return path;
}

}  // namespace h4
