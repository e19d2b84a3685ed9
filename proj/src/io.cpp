#include "h4/io.hpp"

#include <fstream>
#include <sstream>

namespace h4 {

namespace {

// Non-comment, non-blank lines of the stream. The final byte must be a
// newline; anything else is trailing garbage.
std::vector<std::string> data_lines(std::istream& is) {
  std::string all(std::istreambuf_iterator<char>(is), {});
  if (all.empty()) fail(Err::parse, "empty input");
  if (all.back() != '\n') fail(Err::parse, "input not newline-terminated");
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < all.size()) {
    std::size_t end = all.find('\n', start);
    std::string line = all.substr(start, end - start);
    start = end + 1;
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    out.push_back(line);
  }
  return out;
}

struct LineReader {
  std::istringstream in;
  std::string context;
  explicit LineReader(const std::string& line, std::string ctx)
      : in(line), context(std::move(ctx)) {}

  std::string word() {
    std::string w;
    if (!(in >> w)) fail(Err::parse, context + ": missing token");
    return w;
  }
  long long integer() {
    long long v;
    if (!(in >> v)) fail(Err::parse, context + ": expected an integer");
    return v;
  }
  bool at_end() {
    in >> std::ws;
    return in.eof();
  }
  void expect_end() {
    if (!at_end()) fail(Err::parse, context + ": trailing tokens");
  }
  std::vector<int> rest_integers() {
    std::vector<int> out;
    while (!at_end()) out.push_back(int(integer()));
    return out;
  }
};

}  // namespace

void write_graph(std::ostream& os, const Hypergraph4& h,
                 const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "h4 " << h.vertex_count() << ' ' << h.edge_count() << '\n';
  for (const auto& e : h.edges())
    os << "e " << e[0] << ' ' << e[1] << ' ' << e[2] << ' ' << e[3] << '\n';
}

Hypergraph4 read_graph(std::istream& is) {
  auto lines = data_lines(is);
  if (lines.empty()) fail(Err::parse, "graph header missing");
  LineReader head(lines[0], "graph header");
  if (head.word() != "h4") fail(Err::parse, "graph header must start with h4");
  long long n = head.integer();
  long long m = head.integer();
  head.expect_end();
  if (n < 0 || m < 0) fail(Err::parse, "negative count in graph header");
  if (std::size_t(m) != lines.size() - 1)
    fail(Err::parse, "edge count mismatch: header says " + std::to_string(m) +
                         ", found " + std::to_string(lines.size() - 1));
  std::vector<std::array<int, 4>> quads;
  quads.reserve(std::size_t(m));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    LineReader r(lines[i], "edge line " + std::to_string(i));
    if (r.word() != "e") fail(Err::parse, "edge line must start with e");
    std::array<int, 4> q;
    for (int& v : q) v = int(r.integer());
    r.expect_end();
    quads.push_back(q);
  }
  return Hypergraph4::build(int(n), quads);
}

void write_partition(std::ostream& os, const Partition& p) {
  os << "part " << p.n() << '\n';
  os << "A";
  p.a().for_each([&](int v) { os << ' ' << v; });
  os << '\n';
}

Partition read_partition(std::istream& is) {
  auto lines = data_lines(is);
  if (lines.size() != 2) fail(Err::parse, "partition file needs 2 data lines");
  LineReader head(lines[0], "partition header");
  if (head.word() != "part")
    fail(Err::parse, "partition header must start with part");
  long long n = head.integer();
  head.expect_end();
  if (n < 0) fail(Err::parse, "negative vertex count");
  LineReader body(lines[1], "partition side line");
  if (body.word() != "A") fail(Err::parse, "side line must start with A");
  std::vector<int> a = body.rest_integers();
  return Partition(int(n), a);
}

void write_certificate(std::ostream& os, const TightPath& p) {
  os << "path";
  for (int v : p.seq) os << ' ' << v;
  os << '\n';
}

void write_certificate(std::ostream& os, const TightCycle& c) {
  os << "cycle";
  for (int v : c.seq) os << ' ' << v;
  os << '\n';
}

void write_certificate(std::ostream& os, const Certificate& c) {
  std::visit([&](const auto& x) { write_certificate(os, x); }, c);
}

Certificate read_certificate(std::istream& is) {
  auto lines = data_lines(is);
  if (lines.size() != 1) fail(Err::parse, "certificate needs 1 data line");
  LineReader r(lines[0], "certificate");
  std::string kind = r.word();
  std::vector<int> seq = r.rest_integers();
  if (kind == "path") return TightPath{std::move(seq)};
  if (kind == "cycle") return TightCycle{std::move(seq)};
  fail(Err::parse, "certificate kind must be path or cycle, got " + kind);
}

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Err::parse, "cannot open " + path);
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) fail(Err::parse, "cannot open " + path + " for writing");
  return f;
}

}  // namespace

Hypergraph4 read_graph_file(const std::string& path) {
  auto f = open_in(path);
  return read_graph(f);
}

void write_graph_file(const std::string& path, const Hypergraph4& h,
                      const std::vector<std::string>& comments) {
  auto f = open_out(path);
  write_graph(f, h, comments);
}

Partition read_partition_file(const std::string& path) {
  auto f = open_in(path);
  return read_partition(f);
}

void write_partition_file(const std::string& path, const Partition& p) {
  auto f = open_out(path);
  write_partition(f, p);
}

Certificate read_certificate_file(const std::string& path) {
  auto f = open_in(path);
  return read_certificate(f);
}

void write_certificate_file(const std::string& path, const Certificate& c) {
  auto f = open_out(path);
  write_certificate(f, c);
}

}  // namespace h4
