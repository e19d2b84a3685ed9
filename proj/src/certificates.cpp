#include "h4/certificates.hpp"

namespace h4 {

namespace {

VerifyResult check_distinct(const Hypergraph4& h, const std::vector<int>& s) {
  DynBitset seen(std::size_t(h.vertex_count()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    int v = s[i];
    if (v < 0 || v >= h.vertex_count())
      return {false, "vertex " + std::to_string(v) + " at position " +
                         std::to_string(i) + " out of range"};
    if (seen.test(std::size_t(v)))
      return {false, "vertex " + std::to_string(v) + " repeated at position " +
                         std::to_string(i)};
    seen.set(std::size_t(v));
  }
  return {};
}

}  // namespace

VerifyResult verify_tight_path(const Hypergraph4& h, const TightPath& p) {
  VerifyResult d = check_distinct(h, p.seq);
  if (!d.ok) return d;
  const auto& s = p.seq;
  for (std::size_t i = 0; i + 3 < s.size(); ++i) {
    if (!h.has_edge(s[i], s[i + 1], s[i + 2], s[i + 3]))
      return {false, "window at position " + std::to_string(i) +
                         " {" + std::to_string(s[i]) + "," +
                         std::to_string(s[i + 1]) + "," +
                         std::to_string(s[i + 2]) + "," +
                         std::to_string(s[i + 3]) + "} is not an edge"};
  }
  return {};
}

VerifyResult verify_tight_cycle(const Hypergraph4& h, const TightCycle& c) {
  if (c.seq.size() < 5)
    fail(Err::too_short, "cycle needs at least 5 vertices, got " +
                             std::to_string(c.seq.size()));
  VerifyResult d = check_distinct(h, c.seq);
  if (!d.ok) return d;
  const auto& s = c.seq;
  const std::size_t l = s.size();
  for (std::size_t i = 0; i < l; ++i) {
    int a = s[i], b = s[(i + 1) % l], cc = s[(i + 2) % l], dd = s[(i + 3) % l];
    if (!h.has_edge(a, b, cc, dd))
      return {false, "cyclic window at position " + std::to_string(i) +
                         " {" + std::to_string(a) + "," + std::to_string(b) +
                         "," + std::to_string(cc) + "," + std::to_string(dd) +
                         "} is not an edge"};
  }
  return {};
}

bool is_hamiltonian_certificate(const Hypergraph4& h, const TightPath& p) {
  if (p.seq.size() != std::size_t(h.vertex_count())) return false;
  return verify_tight_path(h, p).ok;
}

bool is_hamiltonian_certificate(const Hypergraph4& h, const TightCycle& c) {
  if (c.seq.size() != std::size_t(h.vertex_count())) return false;
  if (c.seq.size() < 5) return false;
  return verify_tight_cycle(h, c).ok;
}

}  // namespace h4
