#pragma once

#include <string>
#include <vector>

#include "h4/hypergraph.hpp"

namespace h4 {

// Certificates carry plain vertex sequences. Verification always recomputes
// against the host graph; nothing is trusted from solver internals.
struct TightPath {
  std::vector<int> seq;
};

struct TightCycle {
  std::vector<int> seq;
};

struct VerifyResult {
  bool ok = true;
  std::string reason;  // first violation; empty when ok
  explicit operator bool() const { return ok; }
};

// True when vertices are distinct, in range, and every run of 4 consecutive
// vertices is an edge. Sequences shorter than 4 verify true.
VerifyResult verify_tight_path(const Hypergraph4& h, const TightPath& p);

// Cyclic variant: all |seq| windows, wrapping around. Throws TooShort for
// sequences under 5 vertices.
VerifyResult verify_tight_cycle(const Hypergraph4& h, const TightCycle& c);

bool is_hamiltonian_certificate(const Hypergraph4& h, const TightPath& p);
bool is_hamiltonian_certificate(const Hypergraph4& h, const TightCycle& c);

}  // namespace h4
