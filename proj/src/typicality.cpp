#include "h4/typicality.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "h4/errors.hpp"
#include "h4/extremal.hpp"

namespace h4 {

namespace {

void check_vertex_id(const Hypergraph4& h, int v) {
  if (v < 0 || v >= h.vertex_count())
    fail(Err::out_of_range, "vertex id " + std::to_string(v));
}

void check_part(const Hypergraph4& h, const Partition& part) {
  if (part.n() != h.vertex_count())
    fail(Err::out_of_range, "partition covers " + std::to_string(part.n()) +
                                " vertices, graph has " +
                                std::to_string(h.vertex_count()));
}

// The typical test bounds the link toward the wrong side; the anarchist test
// bounds the link an other-side vertex would have small. Which count plays
// which role flips with the side.
VertexClass classify_link(const LinkProfile& lp, bool in_a, int na, int nb,
                          double eps) {
  double abb_cap = eps * double(na) * double(choose(std::uint64_t(nb), 2));
  double aab_cap = eps * double(choose(std::uint64_t(na), 2)) * double(nb);
  double typical_cap = in_a ? abb_cap : aab_cap;
  double anarchist_cap = in_a ? aab_cap : abb_cap;
  std::uint64_t typical_link = in_a ? lp.l_abb : lp.l_aab;
  std::uint64_t anarchist_link = in_a ? lp.l_aab : lp.l_abb;
  bool typical_ok = double(typical_link) <= typical_cap;
  bool anarchist_ok = double(anarchist_link) <= anarchist_cap;
  VertexClass c;
  c.eps = eps;
  if (anarchist_ok) {
    c.kind = VertexKind::anarchist;
    c.ambiguous = typical_ok;
  } else if (typical_ok) {
    c.kind = VertexKind::typical;
  } else {
    c.kind = VertexKind::medium;
  }
  return c;
}

bool pair_typical_from(std::uint64_t cross, int pattern, int na, int nb,
                       double eps) {
  if (pattern == kPairAA)
    return double(cross) <= eps * double(choose(std::uint64_t(nb), 2));
  if (pattern == kPairAB) return double(cross) <= eps * double(na) * double(nb);
  return double(cross) <= eps * double(choose(std::uint64_t(na), 2));
}

bool triple_typical_from(int d_a, int d_b, int a_members, int na, int nb,
                         double eps) {
  switch (a_members) {
    case 3: return double(d_b) >= (1.0 - eps) * double(nb);
    case 2: return double(d_b) <= eps * double(nb);
    case 1: return double(d_a) <= eps * double(na);
    default: return double(d_a) >= (1.0 - eps) * double(na);
  }
}

std::string claim_line(const ClaimRow& r) {
  std::ostringstream os;
  os << "claim " << r.name << ' ' << r.lhs << ' ' << r.rhs << ' '
     << (r.pass ? 1 : 0);
  return os.str();
}

void emit_rows(const SolverParams& params, const std::vector<ClaimRow>& rows) {
  if (!params.trace) return;
  for (const ClaimRow& r : rows) params.trace->emit(claim_line(r));
}

int pair_pattern(const Partition& part, int u, int v) {
  int m = (part.in_a(u) ? 1 : 0) + (part.in_a(v) ? 1 : 0);
  return 2 - m;
}

}  // namespace

TypicalityTables build_tables(const Hypergraph4& h, const Partition& part) {
  check_part(h, part);
  TypicalityTables p;
  const int n = h.vertex_count();
  p.h = &h;
  p.part = &part;
  p.n = n;
  p.links.assign(std::size_t(n), LinkProfile{});
  p.pair_aa.assign(std::size_t(n) * std::size_t(n), 0);
  p.pair_ab.assign(std::size_t(n) * std::size_t(n), 0);
  p.pair_bb.assign(std::size_t(n) * std::size_t(n), 0);
  p.trip_da.assign(h.triple_count(), 0);
  p.trip_db.assign(h.triple_count(), 0);
  for (const Edge4& e : h.edges()) {
    int mass = side_mass(part.a(), e);
    int ina[4];
    for (int i = 0; i < 4; ++i) ina[i] = part.in_a(e[i]) ? 1 : 0;
    for (int i = 0; i < 4; ++i) {
      int rest = mass - ina[i];
      LinkProfile& lp = p.links[e[i]];
      if (rest == 3)
        ++lp.l_aaa;
      else if (rest == 2)
        ++lp.l_aab;
      else if (rest == 1)
        ++lp.l_abb;
      else
        ++lp.l_bbb;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        int rest = mass - ina[i] - ina[j];
        std::size_t at = p.pair_at(e[i], e[j]);
        if (rest == 2)
          ++p.pair_aa[at];
        else if (rest == 1)
          ++p.pair_ab[at];
        else
          ++p.pair_bb[at];
      }
    for (int skip = 0; skip < 4; ++skip) {
      int t[3];
      int w = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) t[w++] = e[i];
      std::size_t r = h.triple_rank(t[0], t[1], t[2]);
      if (ina[skip])
        ++p.trip_da[r];
      else
        ++p.trip_db[r];
    }
  }
  return p;
}

VertexClass TypicalityTables::vertex_class(int v, double eps) const {
  return classify_link(links[std::size_t(v)], part->in_a(v), part->a_size(),
                       part->b_size(), eps);
}

bool TypicalityTables::vertex_passes(int v, double eps) const {
  const LinkProfile& lp = links[std::size_t(v)];
  bool in_a = part->in_a(v);
  double cap = in_a ? eps * double(part->a_size()) *
                          double(choose(std::uint64_t(part->b_size()), 2))
                    : eps * double(choose(std::uint64_t(part->a_size()), 2)) *
                          double(part->b_size());
  return double(in_a ? lp.l_abb : lp.l_aab) <= cap;
}

bool TypicalityTables::pair_typical(int u, int v, double eps) const {
  int pattern = pair_pattern(*part, u, v);
  std::size_t at = pair_at(u, v);
  std::uint64_t cross = pattern == kPairAA   ? pair_bb[at]
                        : pattern == kPairAB ? pair_ab[at]
                                             : pair_aa[at];
  return pair_typical_from(cross, pattern, part->a_size(), part->b_size(),
                           eps);
}

bool TypicalityTables::triple_typical(int x, int y, int z, double eps) const {
  std::size_t r = h->triple_rank(x, y, z);
  int am = (part->in_a(x) ? 1 : 0) + (part->in_a(y) ? 1 : 0) +
           (part->in_a(z) ? 1 : 0);
  return triple_typical_from(trip_da[r], trip_db[r], am, part->a_size(),
                             part->b_size(), eps);
}

bool TypicalityTables::window_typical(int x, int y, int z, double e1,
                                      double e2, double e3) const {
  if (!vertex_passes(x, e1) || !vertex_passes(y, e1) || !vertex_passes(z, e1))
    return false;
  if (!pair_typical(x, y, e2) || !pair_typical(x, z, e2) ||
      !pair_typical(y, z, e2))
    return false;
  return triple_typical(x, y, z, e3);
}

const char* vertex_kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::typical: return "typical";
    case VertexKind::medium: return "medium";
    case VertexKind::anarchist: return "anarchist";
  }
  return "unknown";
}

LinkProfile link_profile(const Hypergraph4& h, const Partition& part, int v) {
  check_part(h, part);
  check_vertex_id(h, v);
  LinkProfile lp;
  int self = part.in_a(v) ? 1 : 0;
  for (const Edge4& e : h.edges()) {
    if (e[0] != v && e[1] != v && e[2] != v && e[3] != v) continue;
    int rest = side_mass(part.a(), e) - self;
    if (rest == 3)
      ++lp.l_aaa;
    else if (rest == 2)
      ++lp.l_aab;
    else if (rest == 1)
      ++lp.l_abb;
    else
      ++lp.l_bbb;
  }
  return lp;
}

PairProfile pair_profile(const Hypergraph4& h, const Partition& part, int u,
                         int v) {
  check_part(h, part);
  check_vertex_id(h, u);
  check_vertex_id(h, v);
  if (u == v) fail(Err::out_of_range, "pair needs two distinct vertices");
  PairProfile pp;
  int self = (part.in_a(u) ? 1 : 0) + (part.in_a(v) ? 1 : 0);
  for (const Edge4& e : h.edges()) {
    bool has_u = e[0] == u || e[1] == u || e[2] == u || e[3] == u;
    bool has_v = e[0] == v || e[1] == v || e[2] == v || e[3] == v;
    if (!has_u || !has_v) continue;
    int rest = side_mass(part.a(), e) - self;
    if (rest == 2)
      ++pp.l_aa;
    else if (rest == 1)
      ++pp.l_ab;
    else
      ++pp.l_bb;
  }
  return pp;
}

TripleProfile triple_profile(const Hypergraph4& h, const Partition& part,
                             int x, int y, int z) {
  check_part(h, part);
  check_vertex_id(h, x);
  check_vertex_id(h, y);
  check_vertex_id(h, z);
  if (x == y || x == z || y == z)
    fail(Err::out_of_range, "triple needs three distinct vertices");
  TripleProfile tp;
  DynBitset nbr = h.neighborhood(x, y, z);
  for (int w = 0; w < h.vertex_count(); ++w) {
    if (!nbr.test(std::size_t(w))) continue;
    if (part.in_a(w))
      ++tp.d_a;
    else
      ++tp.d_b;
  }
  return tp;
}

VertexClass classify_vertex(const Hypergraph4& h, const Partition& part, int v,
                            double eps) {
  LinkProfile lp = link_profile(h, part, v);
  return classify_link(lp, part.in_a(v), part.a_size(), part.b_size(), eps);
}

bool classify_pair(const Hypergraph4& h, const Partition& part, int u, int v,
                   double eps) {
  PairProfile pp = pair_profile(h, part, u, v);
  int pattern = pair_pattern(part, u, v);
  std::uint64_t cross = pattern == kPairAA   ? pp.l_bb
                        : pattern == kPairAB ? pp.l_ab
                                             : pp.l_aa;
  return pair_typical_from(cross, pattern, part.a_size(), part.b_size(), eps);
}

bool classify_triple(const Hypergraph4& h, const Partition& part, int x, int y,
                     int z, double eps) {
  TripleProfile tp = triple_profile(h, part, x, y, z);
  int am = (part.in_a(x) ? 1 : 0) + (part.in_a(y) ? 1 : 0) +
           (part.in_a(z) ? 1 : 0);
  return triple_typical_from(tp.d_a, tp.d_b, am, part.a_size(), part.b_size(),
                             eps);
}

bool typical_triple(const Hypergraph4& h, const Partition& part, int x, int y,
                    int z, const SolverParams& params) {
  const int t[3] = {x, y, z};
  for (int v : t) {
    VertexClass c = classify_vertex(h, part, v, params.eps1);
    if (c.kind != VertexKind::typical && !c.ambiguous) return false;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (!classify_pair(h, part, t[i], t[j], params.eps2)) return false;
  return classify_triple(h, part, x, y, z, params.eps3);
}

void TypicalityReport::write(std::ostream& os) const {
  for (std::size_t v = 0; v < vclass.size(); ++v)
    os << "vclass " << v << ' ' << vertex_kind_name(vclass[v].kind) << '\n';
}

TypicalityReport classify_all(const Hypergraph4& h, const Partition& part,
                              const SolverParams& params) {
  check_part(h, part);
  const int n = h.vertex_count();
  const int na = part.a_size(), nb = part.b_size();
  TypicalityTables p = build_tables(h, part);
  TypicalityReport rep;
  rep.eps_vertex = params.eps1;
  rep.eps_pair = params.eps2;
  rep.eps_triple = params.eps3;
  rep.links = p.links;
  rep.vclass.resize(std::size_t(n));
  rep.imbalance.resize(std::size_t(n));
  for (int v = 0; v < n; ++v) {
    const LinkProfile& lp = p.links[std::size_t(v)];
    rep.vclass[std::size_t(v)] =
        classify_link(lp, part.in_a(v), na, nb, params.eps1);
    rep.imbalance[std::size_t(v)] =
        (long long)lp.l_aab - (long long)lp.l_abb;
    switch (rep.vclass[std::size_t(v)].kind) {
      case VertexKind::typical: ++rep.typical_count; break;
      case VertexKind::medium: ++rep.medium_count; break;
      case VertexKind::anarchist: ++rep.anarchist_count; break;
    }
  }
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      int pattern = pair_pattern(part, u, v);
      std::size_t at = p.pair_at(u, v);
      std::uint64_t cross = pattern == kPairAA   ? p.pair_bb[at]
                            : pattern == kPairAB ? p.pair_ab[at]
                                                 : p.pair_aa[at];
      if (!pair_typical_from(cross, pattern, na, nb, params.eps2))
        ++rep.atypical_pairs[pattern];
    }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      for (int z = y + 1; z < n; ++z) {
        std::size_t r = h.triple_rank(x, y, z);
        int am = (part.in_a(x) ? 1 : 0) + (part.in_a(y) ? 1 : 0) +
                 (part.in_a(z) ? 1 : 0);
        if (!triple_typical_from(p.trip_da[r], p.trip_db[r], am, na, nb,
                                 params.eps3))
          ++rep.atypical_triples[3 - am];
      }
  return rep;
}

bool ClaimReport::all_pass() const {
  for (const ClaimRow& r : rows)
    if (!r.pass) return false;
  return true;
}

const ClaimRow* ClaimReport::find(const std::string& name) const {
  for (const ClaimRow& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

void ClaimReport::write(std::ostream& os) const {
  for (const ClaimRow& r : rows) os << claim_line(r) << '\n';
}

ClaimRow check_claim_edges(const Hypergraph4& h, const Partition& part,
                           double c, double c1, const SolverParams& params) {
  check_part(h, part);
  const int na = part.a_size(), nb = part.b_size();
  if (na != nb)
    fail(Err::hypothesis_violated, "|A| = " + std::to_string(na) +
                                       " must equal |B| = " +
                                       std::to_string(nb));
  const double n = double(na);
  std::uint64_t aabb = count_aabb(h, part);
  if (!(double(aabb) < c * n * n * n * n))
    fail(Err::hypothesis_violated,
         "split count " + std::to_string(aabb) + " not below c*n^4");
  int d3 = h.min_codegree();
  if (!(double(d3) >= (1.0 - c1) * n))
    fail(Err::hypothesis_violated,
         "delta3 = " + std::to_string(d3) + " below (1-c1)*n");
  std::uint64_t total = choose(std::uint64_t(na), 3) * std::uint64_t(nb) +
                        std::uint64_t(na) * choose(std::uint64_t(nb), 3);
  std::uint64_t present = 0;
  for (const Edge4& e : h.edges()) {
    int m = side_mass(part.a(), e);
    if (m == 1 || m == 3) ++present;
  }
  ClaimRow row;
  row.name = "edges";
  row.lhs = double(total - present);
  row.rhs = (c1 + 4.0 * c) / 3.0 * n * n * n * n +
            params.slack_c3 * n * n * n;
  row.pass = row.lhs <= row.rhs;
  if (params.trace) params.trace->emit(claim_line(row));
  return row;
}

bool check_fact1(const Hypergraph4& h, const Partition& part, double eps,
                 const SolverParams& params) {
  check_part(h, part);
  const int na = part.a_size(), nb = part.b_size();
  if (na != nb)
    fail(Err::hypothesis_violated, "|A| = " + std::to_string(na) +
                                       " must equal |B| = " +
                                       std::to_string(nb));
  std::uint64_t here = count_aabb(h, part);
  BApproximation best = compute_b(h, params.exact_threshold, params.rng_seed);
  if (here != best.value)
    fail(Err::hypothesis_violated,
         "partition does not attain the minimum split count: " +
             std::to_string(here) + " vs " + std::to_string(best.value));
  const int n = h.vertex_count();
  std::vector<LinkProfile> links(std::size_t(n), LinkProfile{});
  for (const Edge4& e : h.edges()) {
    int mass = side_mass(part.a(), e);
    for (int i = 0; i < 4; ++i) {
      int rest = mass - (part.in_a(e[i]) ? 1 : 0);
      LinkProfile& lp = links[e[i]];
      if (rest == 3)
        ++lp.l_aaa;
      else if (rest == 2)
        ++lp.l_aab;
      else if (rest == 1)
        ++lp.l_abb;
      else
        ++lp.l_bbb;
    }
  }
  bool anarchist_in_a = false, anarchist_in_b = false;
  for (int v = 0; v < n; ++v) {
    VertexClass c =
        classify_link(links[std::size_t(v)], part.in_a(v), na, nb, eps);
    if (c.kind != VertexKind::anarchist) continue;
    (part.in_a(v) ? anarchist_in_a : anarchist_in_b) = true;
  }
  double slack = params.slack_c2 * double(na) * double(na);
  std::vector<ClaimRow> rows;
  if (anarchist_in_b) {
    double worst = 0.0;
    for (int v = 0; v < n; ++v)
      if (part.in_a(v))
        worst = std::max(worst, double(links[std::size_t(v)].l_abb));
    double cap = 3.0 * eps * double(na) *
                     double(choose(std::uint64_t(nb), 2)) +
                 slack;
    rows.push_back({"fact1_a_typical", worst, cap, worst <= cap});
  }
  if (anarchist_in_a) {
    double worst = 0.0;
    for (int v = 0; v < n; ++v)
      if (!part.in_a(v))
        worst = std::max(worst, double(links[std::size_t(v)].l_aab));
    double cap = 3.0 * eps * double(choose(std::uint64_t(na), 2)) *
                     double(nb) +
                 slack;
    rows.push_back({"fact1_b_typical", worst, cap, worst <= cap});
  }
  emit_rows(params, rows);
  for (const ClaimRow& r : rows)
    if (!r.pass) return false;
  return true;
}

ClaimReport check_counting_claims(const Hypergraph4& h, const Partition& part,
                                  const SolverParams& params) {
  check_part(h, part);
  const int N = h.vertex_count();
  const int na = part.a_size(), nb = part.b_size();
  const int d3 = h.min_codegree();
  const std::uint64_t aabb = count_aabb(h, part);
  // Largest scale the codegree floor supports; the floor then holds by
  // construction, so the side and split hypotheses carry the refusals. The
  // crossing-only split construction sits one short of the floor at N/2 and
  // is admitted at scale N/2 - 1 this way.
  const int n = std::min(N / 2, d3 + 1);
  const double e0 = params.eps0;
  const double dn = double(n);
  auto inside = [&](int side) {
    return double(side) >= (1.0 - 5.0 * e0) * dn &&
           double(side) <= (1.0 + 5.0 * e0) * dn;
  };
  if (n < 4 || !inside(na) || !inside(nb))
    fail(Err::hypothesis_violated,
         "side sizes (" + std::to_string(na) + "," + std::to_string(nb) +
             ") outside n +- 5*eps0*n at the largest codegree-supported "
             "scale n=" +
             std::to_string(n) + " (delta3=" + std::to_string(d3) + ")");
  if (!(double(aabb) <= e0 * dn * dn * dn * dn))
    fail(Err::hypothesis_violated,
         "split count " + std::to_string(aabb) + " above eps0*n^4 with n=" +
             std::to_string(n));

  const double eps1 = params.eps1, eps2 = params.eps2, eps3 = params.eps3;
  TypicalityTables p = build_tables(h, part);
  std::vector<char> vtyp(std::size_t(N), 0);
  int atypical_vertices = 0, anarchists_a = 0, anarchists_b = 0;
  for (int v = 0; v < N; ++v) {
    VertexClass c =
        classify_link(p.links[std::size_t(v)], part.in_a(v), na, nb, eps1);
    vtyp[std::size_t(v)] = c.kind == VertexKind::typical ? 1 : 0;
    if (c.kind != VertexKind::typical) ++atypical_vertices;
    if (c.kind == VertexKind::anarchist)
      ++(part.in_a(v) ? anarchists_a : anarchists_b);
  }

  std::vector<char> ptyp(std::size_t(N) * std::size_t(N), 0);
  std::vector<std::uint32_t> cnt2(std::size_t(N) * 3, 0);
  for (int u = 0; u < N; ++u)
    for (int v = u + 1; v < N; ++v) {
      int pattern = pair_pattern(part, u, v);
      std::size_t at = p.pair_at(u, v);
      std::uint64_t cross = pattern == kPairAA   ? p.pair_bb[at]
                            : pattern == kPairAB ? p.pair_ab[at]
                                                 : p.pair_aa[at];
      bool t = pair_typical_from(cross, pattern, na, nb, eps2);
      ptyp[at] = t ? 1 : 0;
      if (!t) {
        ++cnt2[std::size_t(u) * 3 + std::size_t(pattern)];
        ++cnt2[std::size_t(v) * 3 + std::size_t(pattern)];
      }
    }

  std::vector<std::uint32_t> cnt3(std::size_t(N) * 4, 0);
  std::vector<std::uint32_t> cnt4(std::size_t(N) * std::size_t(N) * 4, 0);
  std::uint64_t coro_lhs = 0;
  for (int x = 0; x < N; ++x)
    for (int y = x + 1; y < N; ++y)
      for (int z = y + 1; z < N; ++z) {
        std::size_t r = h.triple_rank(x, y, z);
        int am = (part.in_a(x) ? 1 : 0) + (part.in_a(y) ? 1 : 0) +
                 (part.in_a(z) ? 1 : 0);
        int pattern = 3 - am;
        bool t3 = triple_typical_from(p.trip_da[r], p.trip_db[r], am, na, nb,
                                      eps3);
        if (!t3) {
          ++cnt3[std::size_t(x) * 4 + std::size_t(pattern)];
          ++cnt3[std::size_t(y) * 4 + std::size_t(pattern)];
          ++cnt3[std::size_t(z) * 4 + std::size_t(pattern)];
          ++cnt4[p.pair_at(x, y) * 4 + std::size_t(pattern)];
          ++cnt4[p.pair_at(x, z) * 4 + std::size_t(pattern)];
          ++cnt4[p.pair_at(y, z) * 4 + std::size_t(pattern)];
        }
        bool full = t3 && vtyp[std::size_t(x)] && vtyp[std::size_t(y)] &&
                    vtyp[std::size_t(z)] && ptyp[p.pair_at(x, y)] &&
                    ptyp[p.pair_at(x, z)] && ptyp[p.pair_at(y, z)];
        if (!full) ++coro_lhs;
      }

  ClaimReport rep;
  auto add = [&](std::string name, double lhs, double rhs, bool strict) {
    bool pass = strict ? lhs < rhs : lhs <= rhs;
    rep.rows.push_back({std::move(name), lhs, rhs, pass});
  };
  add("claim1", double(atypical_vertices), 8.0 * (e0 / eps1) * dn, true);
  if (eps1 < 0.2) {
    add("claim1_anarchists_a", double(anarchists_a), 5.0 * e0 * dn, true);
    add("claim1_anarchists_b", double(anarchists_b), 5.0 * e0 * dn, true);
  }

  auto max2 = [&](bool side_a, int pattern) {
    std::uint32_t m = 0;
    for (int v = 0; v < N; ++v)
      if (vtyp[std::size_t(v)] && part.in_a(v) == side_a)
        m = std::max(m, cnt2[std::size_t(v) * 3 + std::size_t(pattern)]);
    return double(m);
  };
  double r2 = (eps1 / eps2) * dn;
  add("claim2_a_aa", max2(true, kPairAA), r2, false);
  add("claim2_a_ab", max2(true, kPairAB), r2, false);
  add("claim2_b_bb", max2(false, kPairBB), r2, false);
  add("claim2_b_ab", max2(false, kPairAB), r2, false);

  auto max3 = [&](bool side_a, int pattern) {
    std::uint32_t m = 0;
    for (int v = 0; v < N; ++v)
      if (vtyp[std::size_t(v)] && part.in_a(v) == side_a)
        m = std::max(m, cnt3[std::size_t(v) * 4 + std::size_t(pattern)]);
    return double(m);
  };
  double r3 = (eps1 / eps3) * dn * dn;
  add("claim3_a_aaa", max3(true, kTripleAAA), r3, false);
  add("claim3_a_aab", max3(true, kTripleAAB), r3, false);
  add("claim3_a_abb", max3(true, kTripleABB), r3, false);
  add("claim3_b_aab", max3(false, kTripleAAB), r3, false);
  add("claim3_b_abb", max3(false, kTripleABB), r3, false);
  add("claim3_b_bbb", max3(false, kTripleBBB), r3, false);

  auto max4 = [&](int pair_pat) {
    std::uint32_t m = 0;
    for (int u = 0; u < N; ++u)
      for (int v = u + 1; v < N; ++v) {
        std::size_t at = p.pair_at(u, v);
        if (!ptyp[at] || pair_pattern(part, u, v) != pair_pat) continue;
        for (int tt = 0; tt < 4; ++tt)
          m = std::max(m, cnt4[at * 4 + std::size_t(tt)]);
      }
    return double(m);
  };
  double r4 = (eps2 / eps3) * dn;
  add("claim4_aa", max4(kPairAA), r4, false);
  add("claim4_ab", max4(kPairAB), r4, false);
  add("claim4_bb", max4(kPairBB), r4, false);

  double required = 16.0 * (e0 / eps1) + 4.0 * (eps1 / eps2) + (eps1 / eps3);
  double eps4_eff = std::max(params.eps4, required);
  add("coro1", double(coro_lhs), eps4_eff * dn * dn * dn, true);

  emit_rows(params, rep.rows);
  return rep;
}

ClaimReport derived_bounds(const Hypergraph4& h, const Partition& part,
                           const std::vector<int>& item, double eps) {
  check_part(h, part);
  if (item.empty() || item.size() > 3)
    fail(Err::out_of_range, "item holds 1 to 3 vertices");
  for (int v : item) check_vertex_id(h, v);
  for (std::size_t i = 0; i < item.size(); ++i)
    for (std::size_t j = i + 1; j < item.size(); ++j)
      if (item[i] == item[j])
        fail(Err::out_of_range, "repeated vertex in item");
  const int na = part.a_size(), nb = part.b_size();
  if (na != nb)
    fail(Err::hypothesis_violated, "bounds are stated for |A| = |B|");
  int d3 = h.min_codegree();
  // Same scale inference as the counting claims, but at most one step of
  // give: the codegree floor is the engine behind every bound here.
  int ne = std::min(na, d3 + 1);
  if (ne < na - 1)
    fail(Err::hypothesis_violated,
         "delta3 = " + std::to_string(d3) + " too far below n-1 = " +
             std::to_string(na - 1));
  double n = double(ne);
  ClaimReport rep;
  auto add = [&](const char* name, double lhs, double rhs) {
    rep.rows.push_back({name, lhs, rhs, lhs >= rhs});
  };
  if (item.size() == 1) {
    int v = item[0];
    VertexClass c = classify_vertex(h, part, v, eps);
    if (c.kind != VertexKind::typical)
      fail(Err::hypothesis_violated,
           "vertex " + std::to_string(v) + " is not typical at this eps");
    LinkProfile lp = link_profile(h, part, v);
    double cube = n * n * n;
    if (part.in_a(v)) {
      add("link_aab_lower", double(lp.l_aab),
          0.5 * n * (n - 1) * (n - 1) - 0.5 * eps * cube);
      add("link_bbb_lower", double(lp.l_bbb),
          n * (n - 1) * (n - 1) / 6.0 - eps * cube / 6.0);
    } else {
      add("link_abb_lower", double(lp.l_abb),
          0.5 * n * (n - 1) * (n - 1) - 0.5 * eps * cube);
      add("link_aaa_lower", double(lp.l_aaa),
          n * (n - 1) * (n - 1) / 6.0 - eps * cube / 6.0);
    }
  } else if (item.size() == 2) {
    if (!classify_pair(h, part, item[0], item[1], eps))
      fail(Err::hypothesis_violated, "pair is not typical at this eps");
    PairProfile pp = pair_profile(h, part, item[0], item[1]);
    int pattern = pair_pattern(part, item[0], item[1]);
    double sq = n * n;
    if (pattern == kPairAB)
      add("pair_same_lower", double(pp.l_aa + pp.l_bb),
          (n - 1) * (n - 1) - eps * sq);
    else
      add("pair_ab_lower", double(pp.l_ab), n * (n - 1) - eps * sq);
  } else {
    if (!classify_triple(h, part, item[0], item[1], item[2], eps))
      fail(Err::hypothesis_violated, "triple is not typical at this eps");
    TripleProfile tp = triple_profile(h, part, item[0], item[1], item[2]);
    int am = 0;
    for (int v : item) am += part.in_a(v) ? 1 : 0;
    double rhs = n - 1.0 - eps * n;
    if (am == 3 || am == 1)
      add("codegree_b_lower", double(tp.d_b), rhs);
    else
      add("codegree_a_lower", double(tp.d_a), rhs);
  }
  return rep;
}

}  // namespace h4
