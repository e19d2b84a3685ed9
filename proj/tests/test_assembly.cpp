#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "h4/assembly.hpp"
#include "h4/certificates.hpp"
#include "h4/errors.hpp"
#include "h4/extremal.hpp"
#include "h4/hypergraph.hpp"
#include "h4/typicality.hpp"

using namespace h4;

namespace {

Err thrown_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  REQUIRE(false);
  return Err::out_of_range;
}

BenchmarkInstance bench(int half, int s, int t, std::uint64_t seed = 1) {
  InstanceRecipe r;
  r.half_size = half;
  r.medium_seeds = s;
  r.anarchists = t;
  r.rng_seed = seed;
  return build_benchmark(r);
}

// Benchmark params as the pipeline would use them.
SolverParams eff_for(const BenchmarkInstance& inst) {
  return effective_params(inst.graph, inst.part, SolverParams::desk());
}

std::vector<int> mediums_at(const Hypergraph4& h, const Partition& part,
                            double eps5) {
  TypicalityTables t = build_tables(h, part);
  std::vector<int> out;
  for (int v = 0; v < part.n(); ++v)
    if (t.vertex_class(v, eps5).kind == VertexKind::medium) out.push_back(v);
  return out;
}

bool all_side(const Partition& part, const std::array<int, 3>& t, bool a) {
  return part.in_a(t[0]) == a && part.in_a(t[1]) == a && part.in_a(t[2]) == a;
}

}  // namespace

TEST_CASE("side difference counts distinct vertices mod 8") {
  Partition p = Partition::front_half(10);  // A = 0..4
  CHECK(side_difference(p, {}) == 0);
  CHECK(side_difference(p, {0}) == 3);
  CHECK(side_difference(p, {7}) == 7);  // -1 mod 8
  CHECK(side_difference(p, {0, 1, 5, 6}) == 4);
  CHECK(side_difference(p, {0, 0, 0, 5}) == 2);  // duplicates count once
  CHECK(thrown_code([&] { side_difference(p, {11}); }) == Err::out_of_range);
}

TEST_CASE("side difference is additive over disjoint words") {
  Partition p = Partition::front_half(20);
  std::mt19937_64 rng(5);
  for (int it = 0; it < 30; ++it) {
    std::vector<int> ids(20);
    for (int i = 0; i < 20; ++i) ids[std::size_t(i)] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t cut = 1 + rng() % 18;
    std::vector<int> w1(ids.begin(), ids.begin() + long(cut));
    std::vector<int> w2(ids.begin() + long(cut), ids.end());
    std::vector<int> both = ids;
    CHECK(side_difference(p, both) ==
          (side_difference(p, w1) + side_difference(p, w2)) % 8);
  }
}

TEST_CASE("ending shape covers every residue") {
  // d = 3*m1-m2 = 8t-6+3e-tau, minimal t, e and tau in {0,1,2}.
  struct Row {
    int r, e, tau;
  };
  const Row rows[8] = {{0, 2, 0}, {1, 0, 1}, {2, 0, 0}, {3, 1, 2},
                       {4, 1, 1}, {5, 1, 0}, {6, 2, 2}, {7, 2, 1}};
  for (int d = 2; d <= 50; ++d) {
    const int m1 = 20, m2 = 3 * m1 - d;
    REQUIRE(m2 >= 0);
    EndingShape s = ending_shape(m1, m2);
    CHECK(3 * m1 - m2 == 8 * s.t - 6 + 3 * s.e - s.tau);
    CHECK(s.t == (d + 7) / 8);
    CHECK(s.e == rows[d % 8].e);
    CHECK(s.tau == rows[d % 8].tau);
    CHECK(s.t >= 1);
  }
  CHECK(thrown_code([] { ending_shape(1, 2); }) == Err::envelope_violated);
  CHECK(thrown_code([] { ending_shape(0, 5); }) == Err::envelope_violated);
}

TEST_CASE("sequencing scale relaxes with eps5") {
  SolverParams p = SolverParams::desk();
  p.eps5 = 0.2;
  const std::array<double, 3> s = seq_scale(p);
  CHECK(s[0] == doctest::Approx(0.8));
  CHECK(s[1] == doctest::Approx(std::pow(0.2, 0.75)));
  CHECK(s[2] == doctest::Approx(std::sqrt(0.2)));
  p.eps5 = 0.3;
  CHECK(seq_scale(p)[0] == doctest::Approx(1.0));
}

TEST_CASE("effective params scale off the typicality median") {
  auto inst = bench(20, 1, 0);
  SolverParams desk = SolverParams::desk();
  SolverParams eff = effective_params(inst.graph, inst.part, desk);
  // non-seed ratio (C(20,2) + 19*18) / (20*C(20,2)) = 0.14, median = 0.14
  CHECK(eff.eps1 == doctest::Approx(0.42).epsilon(0.01));
  CHECK(eff.eps2 == doctest::Approx(eff.eps1));
  CHECK(eff.eps3 == doctest::Approx(eff.eps1));
  CHECK(eff.eps5 == doctest::Approx(eff.eps1));
  CHECK(eff.eps0 == desk.eps0);
  CHECK(eff.eps4 == desk.eps4);

  desk.auto_scale = false;
  SolverParams same = effective_params(inst.graph, inst.part, desk);
  CHECK(same.eps1 == desk.eps1);
  CHECK(same.eps5 == desk.eps5);
}

TEST_CASE("effective params keep the seeds outside the typical range") {
  auto inst = bench(20, 1, 0);
  SolverParams eff = eff_for(inst);
  std::vector<int> meds = mediums_at(inst.graph, inst.part, eff.eps5);
  CHECK(meds == std::vector<int>{0, 20});
}

TEST_CASE("typical triple search respects the pool") {
  Hypergraph4 h = build_h0(20, 20, false);
  Partition p = Partition::front_half(40);
  TypicalityTables tables = build_tables(h, p);
  std::mt19937_64 rng(1);

  DynBitset pool{40};
  for (int v = 0; v < 20; ++v) pool.set(std::size_t(v));
  std::array<int, 3> t =
      find_typical_triple(h, tables, pool, 0.2, 0.2, 0.2, rng);
  std::set<int> seen(t.begin(), t.end());
  CHECK(seen.size() == 3);
  for (int v : t) CHECK(v < 20);
  CHECK(tables.window_typical(t[0], t[1], t[2], 0.2, 0.2, 0.2));

  DynBitset small{40};
  small.set(3);
  small.set(4);
  CHECK(thrown_code([&] {
          find_typical_triple(h, tables, small, 0.2, 0.2, 0.2, rng);
        }) == Err::construction_failed);
}

TEST_CASE("typical triple search rejects a poisoned small pool") {
  auto inst = bench(20, 1, 0);
  SolverParams eff = eff_for(inst);
  TypicalityTables tables = build_tables(inst.graph, inst.part);
  std::mt19937_64 rng(1);
  DynBitset pool{40};
  pool.set(0);  // planted seed fails the vertex test at any tight scale
  pool.set(5);
  pool.set(6);
  const std::array<double, 3> sc = seq_scale(eff);
  CHECK(thrown_code([&] {
          find_typical_triple(inst.graph, tables, pool, sc[0], sc[1], sc[2],
                              rng);
        }) == Err::construction_failed);
}

TEST_CASE("insertion candidates intersect the clipped windows") {
  Hypergraph4 h = build_h0(20, 20, false);
  Partition p = Partition::front_half(40);
  std::vector<int> word = {20, 21, 22, 23, 24, 25};
  DynBitset pool{40};
  for (int v = 0; v < 40; ++v) pool.set(std::size_t(v));

  DynBitset mid = insertion_candidates(h, word, 2, pool);
  // every completion of three bottom vertices is one top vertex
  CHECK(mid.count() == 20);
  for (int v = 0; v < 20; ++v) CHECK(mid.test(std::size_t(v)));

  DynBitset app = insertion_candidates(h, word, 5, pool);
  CHECK(app.count() == 20);
  // word vertices are never candidates
  for (int v : word) CHECK(!app.test(std::size_t(v)));

  CHECK(thrown_code([&] { insertion_candidates(h, word, -1, pool); }) ==
        Err::out_of_range);
  CHECK(thrown_code([&] { insertion_candidates(h, word, 6, pool); }) ==
        Err::out_of_range);
}

TEST_CASE("sequencing orders one side through typical windows") {
  Hypergraph4 h = build_h0(20, 20, false);
  Partition p = Partition::front_half(40);
  SolverParams params = SolverParams::desk();
  std::array<int, 3> from{20, 21, 22}, to{23, 24, 25};
  std::vector<int> interior;
  for (int v = 26; v < 40; ++v) interior.push_back(v);

  Sequencing s = sequence_through(h, p, params, from, to, interior);
  REQUIRE(s.order.size() == 20);
  CHECK(std::equal(from.begin(), from.end(), s.order.begin()));
  CHECK(std::equal(to.begin(), to.end(), s.order.end() - 3));
  std::set<int> want(interior.begin(), interior.end());
  std::set<int> got(s.order.begin() + 3, s.order.end() - 3);
  CHECK(got == want);
  TypicalityTables tables = build_tables(h, p);
  const std::array<double, 3> sc = seq_scale(params);
  for (std::size_t i = 0; i + 2 < s.order.size(); ++i)
    CHECK(tables.window_typical(s.order[i], s.order[i + 1], s.order[i + 2],
                                sc[0], sc[1], sc[2]));
}

TEST_CASE("sequencing rejects undersized or mixed interiors") {
  Hypergraph4 h = build_h0(20, 20, false);
  Partition p = Partition::front_half(40);
  SolverParams params = SolverParams::desk();
  params.seq_c = 0.2;  // demands at least 4 vertices
  std::array<int, 3> from{20, 21, 22}, to{23, 24, 25};
  CHECK(thrown_code([&] {
          sequence_through(h, p, params, from, to, {26, 27});
        }) == Err::hypothesis_violated);
  CHECK(thrown_code([&] {
          sequence_through(h, p, params, from, to, {26, 27, 28, 1, 2});
        }) == Err::hypothesis_violated);
}

TEST_CASE("sequencing handles the tiny permutation range") {
  Hypergraph4 h = build_h0(20, 20, false);
  Partition p = Partition::front_half(40);
  SolverParams params = SolverParams::desk();
  params.seq_c = 0.05;  // one vertex passes the gate
  std::array<int, 3> from{20, 21, 22}, to{23, 24, 25};
  Sequencing s = sequence_through(h, p, params, from, to, {26});
  CHECK(s.order == std::vector<int>{20, 21, 22, 26, 23, 24, 25});
}

TEST_CASE("bridge takes the crossing quadruple when one is planted") {
  // Pure split graph plus four crossing quadruples on the pair {0,1}. Every
  // balanced window is one of the planted quadruples, so whatever route the
  // search picks, the bridge must cross through one of them.
  Hypergraph4 base = build_h0(20, 20, false);
  std::vector<Edge4> edges = base.edges();
  for (int k = 0; k < 4; ++k)
    edges.push_back(make_edge(0, 1, 20 + 2 * k, 21 + 2 * k));
  Hypergraph4 h = Hypergraph4::from_edges(40, std::move(edges));
  Partition p = Partition::front_half(40);
  SolverParams params = SolverParams::desk();
  params.connector_retry_budget = 20000;
  std::mt19937_64 rng(3);
  Bridge b = build_bridge(h, p, params, BridgeOptions{}, rng);
  CHECK(b.path.seq.size() <= 25);
  CHECK(verify_tight_path(h, b.path).ok);
  CHECK(all_side(p, b.end_aaa, true));
  CHECK(all_side(p, b.end_bbb, false));
  bool crosses_planted = false;
  for (std::size_t i = 0; i + 4 <= b.path.seq.size(); ++i) {
    std::set<int> w(b.path.seq.begin() + long(i), b.path.seq.begin() + long(i) + 4);
    for (int k = 0; k < 4; ++k)
      if (w == std::set<int>{0, 1, 20 + 2 * k, 21 + 2 * k})
        crosses_planted = true;
  }
  CHECK(crosses_planted);
}

TEST_CASE("bridge routes through the planted seeds on benchmarks") {
  auto inst = bench(20, 1, 0);
  SolverParams eff = eff_for(inst);
  std::mt19937_64 rng(7);
  Bridge b = build_bridge(inst.graph, inst.part, eff, BridgeOptions{}, rng);
  CHECK(b.z_branch);
  CHECK(b.path.seq.size() <= 25);
  CHECK(verify_tight_path(inst.graph, b.path).ok);
  CHECK(all_side(inst.part, b.end_aaa, true));
  CHECK(all_side(inst.part, b.end_bbb, false));
  // the interior vertex must be one of the two planted seeds
  const bool has_seed = std::count(b.path.seq.begin(), b.path.seq.end(), 0) +
                            std::count(b.path.seq.begin(), b.path.seq.end(),
                                       20) >
                        0;
  CHECK(has_seed);
  CHECK(b.difference == 6);
}

TEST_CASE("bridge honors interior and avoid constraints") {
  auto inst = bench(20, 1, 0);
  SolverParams eff = eff_for(inst);
  std::mt19937_64 rng(9);

  BridgeOptions want0;
  want0.required_interior = 0;
  Bridge b0 = build_bridge(inst.graph, inst.part, eff, want0, rng);
  CHECK(std::count(b0.path.seq.begin(), b0.path.seq.end(), 0) == 1);

  BridgeOptions avoid0;
  avoid0.avoid = {0};
  Bridge b1 = build_bridge(inst.graph, inst.part, eff, avoid0, rng);
  CHECK(std::count(b1.path.seq.begin(), b1.path.seq.end(), 0) == 0);
  CHECK(std::count(b1.path.seq.begin(), b1.path.seq.end(), 20) == 1);

  BridgeOptions both;
  both.avoid = {0, 20};
  CHECK(thrown_code([&] {
          build_bridge(inst.graph, inst.part, eff, both, rng);
        }) == Err::construction_failed);

  BridgeOptions unreachable;
  unreachable.required_interior = 5;
  CHECK(thrown_code([&] {
          build_bridge(inst.graph, inst.part, eff, unreachable, rng);
        }) == Err::construction_failed);
}

TEST_CASE("disjoint bridges share no vertex") {
  Hypergraph4 h = build_matching_fill(20, 1);
  Partition p = Partition::front_half(40);
  SolverParams params = SolverParams::desk();
  std::mt19937_64 rng(5);
  auto [m1, m2] = build_disjoint_bridges(h, p, params, rng);
  CHECK(verify_tight_path(h, m1.path).ok);
  CHECK(verify_tight_path(h, m2.path).ok);
  std::set<int> v1(m1.path.seq.begin(), m1.path.seq.end());
  for (int v : m2.path.seq) CHECK(v1.count(v) == 0);
}

TEST_CASE("disjoint bridges reject tiny instances") {
  Hypergraph4 h = build_matching_fill(6, 1);
  Partition p = Partition::front_half(12);
  SolverParams params = SolverParams::desk();
  std::mt19937_64 rng(1);
  CHECK(thrown_code([&] { build_disjoint_bridges(h, p, params, rng); }) ==
        Err::construction_failed);
}

TEST_CASE("absorber path equals the bridge when nothing is medium") {
  Hypergraph4 h = build_matching_fill(20, 2);
  Partition p = Partition::front_half(40);
  SolverParams params = SolverParams::desk();
  std::mt19937_64 rng(11);
  Bridge m = build_bridge(h, p, params, BridgeOptions{}, rng);
  AbsorberPath q = absorb_medium(h, p, params, m, rng);
  CHECK(q.path.seq == m.path.seq);
  CHECK(q.mediums.empty());
  CHECK(q.absorbers.empty());
}

TEST_CASE("absorbers carry every leftover medium in seven vertices") {
  auto inst = bench(40, 2, 0);
  SolverParams eff = eff_for(inst);
  std::mt19937_64 rng(13);
  Bridge m = build_bridge(inst.graph, inst.part, eff, BridgeOptions{}, rng);
  AbsorberPath q = absorb_medium(inst.graph, inst.part, eff, m, rng);
  CHECK(verify_tight_path(inst.graph, q.path).ok);

  const std::vector<int> meds = mediums_at(inst.graph, inst.part, eff.eps5);
  REQUIRE(meds.size() == 4);  // both planted seed sets
  int inside_bridge = 0;
  for (int v : meds)
    inside_bridge += int(std::count(m.path.seq.begin(), m.path.seq.end(), v));
  CHECK(q.absorbers.size() == meds.size() - std::size_t(inside_bridge));
  for (const auto& unit : q.absorbers) {
    std::set<int> distinct(unit.begin(), unit.end());
    CHECK(distinct.size() == 7);
    CHECK(std::count(q.path.seq.begin(), q.path.seq.end(), unit[3]) == 1);
  }
  // every medium of the instance rides inside the produced path
  for (int v : meds)
    CHECK(std::count(q.path.seq.begin(), q.path.seq.end(), v) == 1);
  CHECK(all_side(inst.part, {q.path.seq[0], q.path.seq[1], q.path.seq[2]},
                 true));
  const std::size_t k = q.path.seq.size();
  CHECK(all_side(inst.part,
                 {q.path.seq[k - 3], q.path.seq[k - 2], q.path.seq[k - 1]},
                 false));
}

TEST_CASE("absorption refuses when everything looks medium") {
  auto inst = bench(20, 1, 0);
  SolverParams eff = eff_for(inst);
  std::mt19937_64 rng(17);
  Bridge m = build_bridge(inst.graph, inst.part, eff, BridgeOptions{}, rng);
  SolverParams tiny = eff;
  tiny.eps5 = 0.01;  // now every vertex fails the typical test
  CHECK(thrown_code([&] {
          absorb_medium(inst.graph, inst.part, tiny, m, rng);
        }) == Err::too_many_mediums);
}

TEST_CASE("exempt mediums stay outside the absorber path") {
  auto inst = bench(20, 2, 0);
  SolverParams eff = eff_for(inst);
  std::mt19937_64 rng(19);
  Bridge m = build_bridge(inst.graph, inst.part, eff, BridgeOptions{}, rng);
  // exempt one medium that the bridge did not swallow
  const std::vector<int> meds = mediums_at(inst.graph, inst.part, eff.eps5);
  int loose = -1;
  for (int v : meds)
    if (!std::count(m.path.seq.begin(), m.path.seq.end(), v)) loose = v;
  REQUIRE(loose >= 0);
  AbsorberPath q =
      absorb_medium(inst.graph, inst.part, eff, m, {loose}, rng);
  CHECK(std::count(q.path.seq.begin(), q.path.seq.end(), loose) == 0);
}

TEST_CASE("transfer moves the planted anarchist and stabilizes") {
  auto inst = bench(20, 2, 1);
  SolverParams eff = eff_for(inst);
  Partition moved = transfer_anarchists(inst.graph, inst.part, eff);
  // the planted anarchist is the last nominal top id
  CHECK(inst.part.in_a(19));
  CHECK(!moved.in_a(19));
  int changed = 0;
  for (int v = 0; v < 40; ++v)
    changed += inst.part.in_a(v) != moved.in_a(v);
  CHECK(changed >= 1);
  CHECK(std::abs(moved.a_size() - 20) <= int(5.0 * eff.eps0 * 20) + 1);
  // a second pass finds nothing left to move
  Partition again = transfer_anarchists(inst.graph, moved, eff);
  CHECK(again.a() == moved.a());
}

TEST_CASE("transfer is the identity without anarchists") {
  auto inst = bench(20, 1, 0);
  SolverParams eff = eff_for(inst);
  Partition moved = transfer_anarchists(inst.graph, inst.part, eff);
  CHECK(moved.a() == inst.part.a());
}

TEST_CASE("transfer refuses oversized anarchist sets") {
  auto inst = bench(20, 2, 1);
  SolverParams eff = eff_for(inst);
  eff.eps0 = 0.0001;  // budget below one vertex
  CHECK(thrown_code([&] {
          transfer_anarchists(inst.graph, inst.part, eff);
        }) == Err::budget_exceeded);
}

TEST_CASE("exhaustive extension closes small gaps") {
  Hypergraph4 h = build_matching_fill(20, 3);
  Partition p = Partition::front_half(40);
  SolverParams params = SolverParams::desk();
  std::mt19937_64 rng(21);
  Bridge m = build_bridge(h, p, params, BridgeOptions{}, rng);
  std::vector<int> leftover;
  for (int v = 0; v < 40; ++v)
    if (!std::count(m.path.seq.begin(), m.path.seq.end(), v))
      leftover.push_back(v);
  std::vector<int> full =
      extend_exhaustive(h, m.path.seq, leftover, false, 8000000, rng);
  if (!full.empty()) {
    TightPath tp{full};
    CHECK(is_hamiltonian_certificate(h, tp));
  }
  CHECK(thrown_code([&] {
          extend_exhaustive(h, {m.path.seq[0], m.path.seq[1]}, leftover,
                            false, 1000, rng);
        }) == Err::out_of_range);
}

TEST_CASE("path completion finishes a benchmark instance") {
  auto inst = bench(20, 1, 0);
  SolverParams eff = eff_for(inst);
  std::mt19937_64 rng(23);
  Bridge m = build_bridge(inst.graph, inst.part, eff, BridgeOptions{}, rng);
  AbsorberPath q = absorb_medium(inst.graph, inst.part, eff, m, rng);
  Partition moved = transfer_anarchists(inst.graph, inst.part, eff);
  TightPath path = complete_path(inst.graph, moved, eff, q);
  CHECK(is_hamiltonian_certificate(inst.graph, path));
}

TEST_CASE("solver delivers a certificate end to end") {
  auto inst = bench(20, 1, 0);
  TightPath path = solve_ham_path(inst.graph, SolverParams::desk());
  CHECK(is_hamiltonian_certificate(inst.graph, path));
}

TEST_CASE("solver succeeds on an odd vertex count") {
  InstanceRecipe r;
  r.half_size = 40;
  r.medium_seeds = 2;
  r.odd_total = true;
  auto inst = build_benchmark(r);
  REQUIRE(inst.graph.vertex_count() == 81);
  TightPath path = solve_ham_path(inst.graph, SolverParams::desk());
  CHECK(is_hamiltonian_certificate(inst.graph, path));
}

TEST_CASE("solver emits stage traces") {
  auto inst = bench(20, 1, 0);
  SolverParams params = SolverParams::desk();
  TraceLog log;
  params.trace = &log;
  TightPath path = solve_ham_path(inst.graph, params);
  CHECK(is_hamiltonian_certificate(inst.graph, path));
  CHECK(log.contains("autoscale"));
  CHECK(log.contains("stage split ok"));
  CHECK(log.contains("stage classify ok"));
  CHECK(log.contains("stage bridge ok"));
  CHECK(log.contains("stage absorb ok"));
  CHECK(log.contains("stage transfer ok"));
  CHECK(log.contains("stage complete ok"));
  CHECK(log.contains("bridge size="));
  CHECK(log.contains("absorb mediums="));
  CHECK(log.contains("transfer moved=0"));
}

TEST_CASE("solver stops below the codegree threshold") {
  Hypergraph4 h = build_h0(20, 20, false);  // codegree 18, threshold 19
  CHECK(thrown_code([&] { solve_ham_path(h, SolverParams::desk()); }) ==
        Err::threshold_not_met);
}

TEST_CASE("solver stops below the minimum size") {
  Hypergraph4 h = build_matching_fill(6, 1);
  CHECK(thrown_code([&] { solve_ham_path(h, SolverParams::desk()); }) ==
        Err::threshold_not_met);
}

TEST_CASE("solver handles the matching fill family") {
  Hypergraph4 h = build_matching_fill(20, 4);
  TightPath path = solve_ham_path(h, SolverParams::desk());
  CHECK(is_hamiltonian_certificate(h, path));
}

TEST_CASE("solver scales to the middle benchmark size") {
  auto inst = bench(40, 2, 1);
  TightPath path = solve_ham_path(inst.graph, SolverParams::desk());
  CHECK(is_hamiltonian_certificate(inst.graph, path));
}
