#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "h4/certificates.hpp"
#include "h4/hypergraph.hpp"

namespace h4 {

// Text formats. All emitted files are newline-terminated; parsers reject
// trailing garbage, short lines, and extra tokens. Lines starting with '#'
// are comments and may appear anywhere.
//
//   graph:      "h4 <N> <M>" then M lines "e v1 v2 v3 v4"
//   partition:  "part <N>" then "A v1 v2 ..."
//   certificate: "path v1 v2 ..." or "cycle v1 v2 ..."

void write_graph(std::ostream& os, const Hypergraph4& h,
                 const std::vector<std::string>& comments = {});
Hypergraph4 read_graph(std::istream& is);

void write_partition(std::ostream& os, const Partition& p);
Partition read_partition(std::istream& is);

using Certificate = std::variant<TightPath, TightCycle>;
void write_certificate(std::ostream& os, const TightPath& p);
void write_certificate(std::ostream& os, const TightCycle& c);
void write_certificate(std::ostream& os, const Certificate& c);
Certificate read_certificate(std::istream& is);

Hypergraph4 read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const Hypergraph4& h,
                      const std::vector<std::string>& comments = {});
Partition read_partition_file(const std::string& path);
void write_partition_file(const std::string& path, const Partition& p);
Certificate read_certificate_file(const std::string& path);
void write_certificate_file(const std::string& path, const Certificate& c);

}  // namespace h4
