#include "h4/connector.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "h4/errors.hpp"
#include "h4/typicality.hpp"

namespace h4 {
namespace {

void check_vertex(const Hypergraph4& h, int v) {
  if (v < 0 || v >= h.vertex_count())
    fail(Err::out_of_range, "vertex " + std::to_string(v));
}

int a_mass(const Partition& part, const std::array<int, 3>& t) {
  int m = 0;
  for (int v : t) m += part.in_a(v) ? 1 : 0;
  return m;
}

std::uint64_t required_crossing(std::uint64_t sa, std::uint64_t sb) {
  return choose(sa, 3) * sb + sa * choose(sb, 3);
}

// Side layout of the whole path. Slot g takes the minority side exactly when
// g lands on the chain {j, j+4, j+8, ...}, where j is the minority position
// in the from-triple (3 when it has none). Spacing the minority by exactly 4
// makes every window carry exactly one minority vertex, and the admissible
// length is then unique in [9, 12] by the mod-4 constraint from the ends.
struct SideWord {
  int len = 0;
  std::array<char, 12> minority{};
};

SideWord side_word(int from_pos, int to_pos) {
  const int j = from_pos < 0 ? 3 : from_pos;
  int want = to_pos < 0 ? j % 4 : ((j - to_pos + 3) % 4 + 4) % 4;
  SideWord w;
  for (int len = 9; len <= 12; ++len)
    if (len % 4 == want) w.len = len;
  for (int g = 0; g < w.len; ++g)
    w.minority[std::size_t(g)] = (g % 4 == j % 4) ? 1 : 0;
  return w;
}

struct RequestContext {
  int n_scale = 0;
  bool minority_is_a = false;
  int from_pos = -1;
  int to_pos = -1;
  std::vector<char> blocked;  // avoid set plus both end triples
  std::vector<char> in_avoid;
};

RequestContext validate_request(const Hypergraph4& h, const Partition& part,
                                const ConnectorRequest& req) {
  const int n = h.vertex_count();
  if (part.n() != n)
    fail(Err::out_of_range, "partition covers " + std::to_string(part.n()) +
                                " vertices, graph has " + std::to_string(n));
  RequestContext ctx;
  ctx.n_scale = n / 2;
  ctx.blocked.assign(std::size_t(n), 0);
  ctx.in_avoid.assign(std::size_t(n), 0);
  for (int v : req.triple_from) check_vertex(h, v);
  for (int v : req.triple_to) check_vertex(h, v);
  std::vector<int> ends;
  for (int v : req.triple_from) ends.push_back(v);
  for (int v : req.triple_to) ends.push_back(v);
  std::sort(ends.begin(), ends.end());
  if (std::adjacent_find(ends.begin(), ends.end()) != ends.end())
    fail(Err::hypothesis_violated, "end triples share a vertex");
  for (int v : ends) ctx.blocked[std::size_t(v)] = 1;
  int k_size = 0;
  for (int v : req.avoid) {
    check_vertex(h, v);
    if (ctx.blocked[std::size_t(v)] && !ctx.in_avoid[std::size_t(v)])
      fail(Err::hypothesis_violated,
           "avoid set touches an end triple at vertex " + std::to_string(v));
    if (!ctx.in_avoid[std::size_t(v)]) {
      ctx.in_avoid[std::size_t(v)] = 1;
      ctx.blocked[std::size_t(v)] = 1;
      ++k_size;
    }
  }
  const int k_cap = 2 * ctx.n_scale / 3;
  if (k_size > k_cap)
    fail(Err::hypothesis_violated,
         "avoid set has " + std::to_string(k_size) + " vertices, cap is " +
             std::to_string(k_cap));
  const int m1 = a_mass(part, req.triple_from);
  const int m2 = a_mass(part, req.triple_to);
  if (!is_h0_connected(part, req.triple_from, req.triple_to))
    fail(Err::hypothesis_violated,
         "end triples sit on opposite majorities (" + std::to_string(m1) +
             " vs " + std::to_string(m2) + " A-vertices)");
  ctx.minority_is_a = m1 < 2;
  for (int i = 0; i < 3; ++i) {
    bool a = part.in_a(req.triple_from[std::size_t(i)]);
    if (a == ctx.minority_is_a) ctx.from_pos = i;
    a = part.in_a(req.triple_to[std::size_t(i)]);
    if (a == ctx.minority_is_a) ctx.to_pos = i;
  }
  const auto check_typical = [&](const std::array<int, 3>& t,
                                 const char* which) {
    if (!typical_triple(h, part, t[0], t[1], t[2], req.params))
      fail(Err::hypothesis_violated,
           std::string(which) + " triple is not typical at the profile scales");
  };
  check_typical(req.triple_from, "from");
  check_typical(req.triple_to, "to");
  return ctx;
}

// Counts edges of h that are odd-crossing and lie fully inside each scope.
// Completeness of a scope is equivalent to its count reaching the crossing
// quota for its side sizes, which one edge sweep decides.
struct ScopeCounts {
  std::uint64_t present_t = 0, present_u1 = 0, present_u2 = 0;
};

ScopeCounts count_present(const Hypergraph4& h, const Partition& part,
                          const std::vector<char>& in_t,
                          const std::vector<char>& in_u1,
                          const std::vector<char>& in_u2) {
  ScopeCounts c;
  for (const Edge4& e : h.edges()) {
    int m = side_mass(part.a(), e);
    if (m != 1 && m != 3) continue;
    bool t = true, u1 = true, u2 = true;
    for (auto v : e) {
      t = t && in_t[v];
      u1 = u1 && in_u1[v];
      u2 = u2 && in_u2[v];
    }
    c.present_t += t ? 1 : 0;
    c.present_u1 += u1 ? 1 : 0;
    c.present_u2 += u2 ? 1 : 0;
  }
  return c;
}

struct SampleTallies {
  int p0 = 0, p1 = 0, p2 = 0, p3 = 0, small_a = 0, small_b = 0;
  int attempts = 0;
};

// Locates one missing crossing quadruple and reports how many end-triple
// vertices it uses (the failure classes of the union events). Checked in
// cheap-to-expensive order; only reached when the counting sweep already
// proved a violation exists.
int classify_failure(const Hypergraph4& h, const Partition& part,
                     const std::vector<int>& t,
                     const std::array<int, 3>& t1,
                     const std::array<int, 3>& t2) {
  const std::array<int, 3>* triples[2] = {&t1, &t2};
  auto missing = [&](int a, int b, int c, int d) {
    Edge4 e = make_edge(a, b, c, d);
    int m = side_mass(part.a(), e);
    return (m == 1 || m == 3) && !h.has_edge(e);
  };
  for (const auto* tr : triples)
    for (int u : t)
      if (missing((*tr)[0], (*tr)[1], (*tr)[2], u)) return 3;
  for (const auto* tr : triples)
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        for (std::size_t x = 0; x < t.size(); ++x)
          for (std::size_t y = x + 1; y < t.size(); ++y)
            if (missing((*tr)[std::size_t(i)], (*tr)[std::size_t(j)], t[x],
                        t[y]))
              return 2;
  for (const auto* tr : triples)
    for (int i = 0; i < 3; ++i)
      for (std::size_t x = 0; x < t.size(); ++x)
        for (std::size_t y = x + 1; y < t.size(); ++y)
          for (std::size_t z = y + 1; z < t.size(); ++z)
            if (missing((*tr)[std::size_t(i)], t[x], t[y], t[z])) return 1;
  for (std::size_t x = 0; x < t.size(); ++x)
    for (std::size_t y = x + 1; y < t.size(); ++y)
      for (std::size_t z = y + 1; z < t.size(); ++z)
        for (std::size_t w = z + 1; w < t.size(); ++w)
          if (missing(t[x], t[y], t[z], t[w])) return 0;
  return -1;
}

[[noreturn]] void report_exhausted(const ConnectorRequest& req,
                                   const SampleTallies& tal,
                                   const std::string& prefix) {
  if (req.params.trace) {
    auto row = [&](const char* name, int count) {
      req.params.trace->emit("claim " + std::string(name) + " " +
                             std::to_string(count) + " " +
                             std::to_string(tal.attempts) + " 0");
    };
    row("connector_p0_like", tal.p0);
    row("connector_p1_like", tal.p1);
    row("connector_p2_like", tal.p2);
    row("connector_p3_like", tal.p3);
    row("connector_small_a", tal.small_a);
    row("connector_small_b", tal.small_b);
  }
  fail(Err::budget_exhausted,
       prefix + "attempts=" + std::to_string(tal.attempts) +
           " p0_like=" + std::to_string(tal.p0) +
           " p1_like=" + std::to_string(tal.p1) +
           " p2_like=" + std::to_string(tal.p2) +
           " p3_like=" + std::to_string(tal.p3) +
           " small_a=" + std::to_string(tal.small_a) +
           " small_b=" + std::to_string(tal.small_b));
}

ConnectorSet sample_pool(const Hypergraph4& h, const Partition& part,
                         const ConnectorRequest& req,
                         const RequestContext& ctx, std::mt19937_64& rng) {
  const int n = h.vertex_count();
  const double p =
      double(req.params.sample_rate_numerator) / double(ctx.n_scale);
  // At rate >= 1 the draw includes every unblocked vertex; retrying cannot
  // produce anything new, so a single attempt decides.
  const bool deterministic = p >= 1.0;
  const int budget =
      deterministic ? 1 : std::max(1, req.params.connector_retry_budget);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  SampleTallies tal;
  std::vector<char> in_t(std::size_t(n), 0), in_u1, in_u2;
  std::vector<int> members;
  for (int attempt = 0; attempt < budget; ++attempt) {
    ++tal.attempts;
    members.clear();
    std::fill(in_t.begin(), in_t.end(), 0);
    for (int v = 0; v < n; ++v) {
      // The coin is spent on every vertex so the stream never depends on
      // the avoid set; blocked vertices just discard theirs.
      bool take = deterministic || coin(rng) < p;
      if (take && !ctx.blocked[std::size_t(v)]) {
        in_t[std::size_t(v)] = 1;
        members.push_back(v);
      }
    }
    int ta = 0;
    for (int v : members) ta += part.in_a(v) ? 1 : 0;
    int tb = int(members.size()) - ta;
    if (ta < 5) {
      ++tal.small_a;
      continue;
    }
    if (tb < 5) {
      ++tal.small_b;
      continue;
    }
    in_u1 = in_t;
    in_u2 = in_t;
    for (int v : req.triple_from) in_u1[std::size_t(v)] = 1;
    for (int v : req.triple_to) in_u2[std::size_t(v)] = 1;
    ScopeCounts c = count_present(h, part, in_t, in_u1, in_u2);
    const int m1 = a_mass(part, req.triple_from);
    const int m2 = a_mass(part, req.triple_to);
    bool ok =
        c.present_t == required_crossing(std::uint64_t(ta), std::uint64_t(tb)) &&
        c.present_u1 == required_crossing(std::uint64_t(ta + m1),
                                          std::uint64_t(tb + 3 - m1)) &&
        c.present_u2 == required_crossing(std::uint64_t(ta + m2),
                                          std::uint64_t(tb + 3 - m2));
    if (ok) {
      if (req.params.trace)
        req.params.trace->emit("claim connector_pool " +
                               std::to_string(tal.attempts - 1) + " " +
                               std::to_string(tal.attempts) + " 1");
      return ConnectorSet{members};
    }
    switch (classify_failure(h, part, members, req.triple_from,
                             req.triple_to)) {
      case 0: ++tal.p0; break;
      case 1: ++tal.p1; break;
      case 2: ++tal.p2; break;
      default: ++tal.p3; break;
    }
  }
  report_exhausted(req, tal, "connector pool exhausted: ");
}

// Deterministic realization of the side word: fill interior slots left to
// right with the smallest unused vertex of the demanded side whose freshly
// completed window is an edge. Bounded so a hostile instance cannot stall.
bool direct_search(const Hypergraph4& h, const Partition& part,
                   const ConnectorRequest& req, const RequestContext& ctx,
                   const SideWord& word, std::vector<int>& seq) {
  const int n = h.vertex_count();
  const int len = word.len;
  seq.assign(std::size_t(len), -1);
  for (int i = 0; i < 3; ++i) {
    seq[std::size_t(i)] = req.triple_from[std::size_t(i)];
    seq[std::size_t(len - 3 + i)] = req.triple_to[std::size_t(i)];
  }
  std::vector<int> pool_min, pool_maj;
  for (int v = 0; v < n; ++v) {
    if (ctx.blocked[std::size_t(v)]) continue;
    (part.in_a(v) == ctx.minority_is_a ? pool_min : pool_maj).push_back(v);
  }
  std::vector<char> used(std::size_t(n), 0);
  long long nodes = 1 << 20;
  const int last = len - 4;  // final interior slot
  auto window_ok = [&](int s) {
    return h.has_edge(make_edge(seq[std::size_t(s)], seq[std::size_t(s + 1)],
                                seq[std::size_t(s + 2)],
                                seq[std::size_t(s + 3)]));
  };
  std::function<bool(int)> place = [&](int g) -> bool {
    if (g > last) return true;
    const std::vector<int>& pool =
        word.minority[std::size_t(g)] ? pool_min : pool_maj;
    for (int v : pool) {
      if (used[std::size_t(v)]) continue;
      if (--nodes < 0) return false;
      seq[std::size_t(g)] = v;
      used[std::size_t(v)] = 1;
      bool ok = window_ok(g - 3);
      if (ok && g == last)
        ok = window_ok(len - 6) && window_ok(len - 5) && window_ok(len - 4);
      if (ok && place(g + 1)) return true;
      used[std::size_t(v)] = 0;
      seq[std::size_t(g)] = -1;
      if (nodes < 0) return false;
    }
    return false;
  };
  return place(3);
}

TightPath assemble_from_pool(const Hypergraph4& h, const Partition& part,
                             const ConnectorRequest& req,
                             const RequestContext& ctx, const SideWord& word,
                             const ConnectorSet& pool) {
  std::vector<int> from_min, from_maj;
  for (int v : pool.members)
    (part.in_a(v) == ctx.minority_is_a ? from_min : from_maj).push_back(v);
  TightPath path;
  path.seq.assign(std::size_t(word.len), -1);
  for (int i = 0; i < 3; ++i) {
    path.seq[std::size_t(i)] = req.triple_from[std::size_t(i)];
    path.seq[std::size_t(word.len - 3 + i)] = req.triple_to[std::size_t(i)];
  }
  std::size_t next_min = 0, next_maj = 0;
  for (int g = 3; g <= word.len - 4; ++g) {
    std::vector<int>& src = word.minority[std::size_t(g)] ? from_min : from_maj;
    std::size_t& next = word.minority[std::size_t(g)] ? next_min : next_maj;
    if (next >= src.size())
      fail(Err::construction_failed, "connector pool too small for the word");
    path.seq[std::size_t(g)] = src[next++];
  }
  VerifyResult vr = verify_tight_path(h, path);
  if (!vr.ok)
    fail(Err::construction_failed,
         "complete pool produced a broken window: " + vr.reason);
  return path;
}

}  // namespace

bool is_h0_connected(const Partition& part, const std::array<int, 3>& t1,
                     const std::array<int, 3>& t2) {
  for (int v : t1)
    if (v < 0 || v >= part.n()) fail(Err::out_of_range, std::to_string(v));
  for (int v : t2)
    if (v < 0 || v >= part.n()) fail(Err::out_of_range, std::to_string(v));
  const int m1 = a_mass(part, t1), m2 = a_mass(part, t2);
  return (m1 >= 2 && m2 >= 2) || (m1 <= 1 && m2 <= 1);
}

bool is_h0_complete(const Hypergraph4& h, const Partition& part,
                    const std::vector<int>& s) {
  if (part.n() != h.vertex_count())
    fail(Err::out_of_range, "partition size mismatch");
  std::vector<int> v = s;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (int x : v) check_vertex(h, x);
  const std::size_t k = v.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      for (std::size_t c = b + 1; c < k; ++c)
        for (std::size_t d = c + 1; d < k; ++d) {
          Edge4 e = make_edge(v[a], v[b], v[c], v[d]);
          int m = side_mass(part.a(), e);
          if ((m == 1 || m == 3) && !h.has_edge(e)) return false;
        }
  return true;
}

ConnectorSet sample_connector_set(const Hypergraph4& h, const Partition& part,
                                  const ConnectorRequest& req,
                                  std::mt19937_64& rng) {
  RequestContext ctx = validate_request(h, part, req);
  return sample_pool(h, part, req, ctx, rng);
}

TightPath connect_triples(const Hypergraph4& h, const Partition& part,
                          const ConnectorRequest& req, std::mt19937_64& rng) {
  RequestContext ctx = validate_request(h, part, req);
  SideWord word = side_word(ctx.from_pos, ctx.to_pos);
  std::vector<int> seq;
  if (direct_search(h, part, req, ctx, word, seq)) {
    TightPath path{seq};
    VerifyResult vr = verify_tight_path(h, path);
    if (!vr.ok)
      fail(Err::construction_failed, "direct connector invalid: " + vr.reason);
    if (req.params.trace)
      req.params.trace->emit("claim connector_path " +
                             std::to_string(word.len) + " 12 1");
    return path;
  }
  ConnectorSet pool;
  try {
    pool = sample_pool(h, part, req, ctx, rng);
  } catch (const Error& e) {
    if (e.code() != Err::budget_exhausted) throw;
    fail(Err::budget_exhausted,
         std::string("direct interior search exhausted and ") + e.what());
  }
  TightPath path = assemble_from_pool(h, part, req, ctx, word, pool);
  if (req.params.trace)
    req.params.trace->emit("claim connector_path " + std::to_string(word.len) +
                           " 12 1");
  return path;
}

}  // namespace h4
