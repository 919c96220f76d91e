#include "store_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "gmine/error.hpp"

namespace gmine {

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

namespace detail {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

/// Space-separated tokens; at most `max_fields`, the last one taking the remainder.
std::vector<std::string_view> tokens(std::string_view line, std::size_t max_fields = 64) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size() && out.size() + 1 < max_fields) {
    std::size_t j = line.find(' ', i);
    if (j == std::string_view::npos) break;
    out.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  if (i <= line.size()) out.push_back(line.substr(i));
  return out;
}

[[noreturn]] void corrupt(const fs::path& path, std::size_t line_no, const std::string& what) {
  fail(ErrorKind::Invariant, path.string() + ":" + std::to_string(line_no) + ": " + what);
}

NodeId id_field(std::string_view text, const fs::path& path, std::size_t line_no) {
  auto v = parse_node_id(text);
  if (!v) corrupt(path, line_no, "bad id '" + std::string(text) + "'");
  return *v;
}

double weight_field(std::string_view text, const fs::path& path, std::size_t line_no) {
  auto w = parse_weight(text);
  if (!w) corrupt(path, line_no, "bad weight '" + std::string(text) + "'");
  return *w;
}

Edge edge_fields(std::string_view a, std::string_view b, std::string_view w, const fs::path& path,
                 std::size_t line_no) {
  const NodeId s = id_field(a, path, line_no);
  const NodeId t = id_field(b, path, line_no);
  if (s >= t) corrupt(path, line_no, "edge not in canonical orientation");
  return Edge{s, t, weight_field(w, path, line_no)};
}

void write_edge(std::ostream& out, const Edge& e) {
  out << e.source << ' ' << e.target << ' ' << format_weight(e.weight);
}

}  // namespace

void write_csv(std::ostream& out, std::span<const std::uint64_t> values) {
  if (values.empty()) {
    out << '-';
    return;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
}

std::vector<std::uint64_t> parse_csv(std::string_view text, const std::string& context) {
  std::vector<std::uint64_t> out;
  if (text == "-") return out;
  while (true) {
    auto comma = text.find(',');
    auto v = parse_node_id(text.substr(0, comma));
    if (!v) fail(ErrorKind::Invariant, context + ": bad id list");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void write_leaf_file(const fs::path& path, const Graph& g, std::span<const NodeId> members,
                     std::span<const Edge> internal) {
  auto out = open_out(path);
  for (NodeId v : members) {
    out << "N " << v;
    if (auto label = g.label(v)) out << ' ' << *label;
    out << '\n';
  }
  for (const Edge& e : internal) {
    out << "E ";
    write_edge(out, e);
    out << '\n';
  }
  if (!out) fail(ErrorKind::Io, "write failure on " + path.string());
}

LeafFileContents read_leaf_contents(const fs::path& path) {
  auto in = open_in(path);
  LeafFileContents contents;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("N ", 0) == 0) {
      auto f = tokens(std::string_view(line).substr(2), 2);
      const NodeId v = id_field(f[0], path, line_no);
      contents.nodes.push_back(v);
      if (f.size() == 2) contents.labels.emplace_back(v, std::string(f[1]));
    } else if (line.rfind("E ", 0) == 0) {
      auto f = tokens(std::string_view(line).substr(2));
      if (f.size() != 3) corrupt(path, line_no, "expected 'E <src> <dst> <w>'");
      contents.edges.push_back(edge_fields(f[0], f[1], f[2], path, line_no));
    } else {
      corrupt(path, line_no, "unexpected line");
    }
  }
  return contents;
}

Graph read_leaf_file(const fs::path& path) {
  LeafFileContents c = read_leaf_contents(path);
  GraphBuilder builder;
  builder.reserve(c.nodes.size(), c.edges.size());
  for (NodeId v : c.nodes) builder.add_node(v);
  for (const Edge& e : c.edges) builder.add_edge(e.source, e.target, e.weight);
  for (auto& [v, label] : c.labels) builder.set_label(v, std::move(label));
  Graph g = std::move(builder).build();
  if (g.node_count() != c.nodes.size() || g.edge_count() != c.edges.size()) {
    fail(ErrorKind::Invariant, path.string() + ": duplicate nodes or edges, or edge endpoint missing an N line");
  }
  return g;
}

std::size_t count_leaf_edges(const fs::path& path, std::span<const NodeId> members) {
  LeafFileContents c = read_leaf_contents(path);
  if (!std::equal(c.nodes.begin(), c.nodes.end(), members.begin(), members.end())) {
    fail(ErrorKind::Invariant, path.string() + ": node lines differ from the leaf's members");
  }
  for (const Edge& e : c.edges) {
    if (!std::binary_search(members.begin(), members.end(), e.source) ||
        !std::binary_search(members.begin(), members.end(), e.target)) {
      fail(ErrorKind::Invariant, path.string() + ": edge " + std::to_string(e.source) + "-" +
                                     std::to_string(e.target) + " leaves the leaf");
    }
  }
  return c.edges.size();
}

void write_staging_file(const fs::path& path, std::span<const StagedEdge> records) {
  auto out = open_out(path);
  for (const StagedEdge& r : records) {
    out << "X ";
    write_edge(out, r.edge);
    out << ' ' << r.inside << '\n';
  }
  if (!out) fail(ErrorKind::Io, "write failure on " + path.string());
}

std::vector<StagedEdge> read_staging_file(const fs::path& path) {
  auto in = open_in(path);
  std::vector<StagedEdge> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = tokens(line);
    if (f.size() != 5 || f[0] != "X") corrupt(path, line_no, "expected 'X <src> <dst> <w> <inside>'");
    StagedEdge r{edge_fields(f[1], f[2], f[3], path, line_no), id_field(f[4], path, line_no)};
    if (!r.edge.touches(r.inside)) corrupt(path, line_no, "inside endpoint not on the edge");
    out.push_back(r);
  }
  return out;
}

Manifest read_manifest(const fs::path& path) {
  auto in = open_in(path);
  Manifest m;
  std::string line;
  if (!std::getline(in, line)) corrupt(path, 1, "empty manifest");
  auto header = tokens(line);
  if (header.size() != 6 || header[0] != "graphtree") corrupt(path, 1, "not a graphtree manifest");
  if (header[1] != "v1") {
    fail(ErrorKind::Invariant, path.string() + ": version mismatch (found " + std::string(header[1]) + ", expected v1)");
  }
  m.k = id_field(header[2], path, 1);
  m.h = id_field(header[3], path, 1);
  m.vertex_count = id_field(header[4], path, 1);
  m.edge_count = id_field(header[5], path, 1);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = tokens(line);
    if (f.size() != 6 || f[0] != "node") corrupt(path, line_no, "expected 'node <id> <kind> <parent> <children> <open>'");
    TreeNode n;
    n.id = SuperNodeId{static_cast<std::uint32_t>(id_field(f[1], path, line_no))};
    if (n.id.value != m.nodes.size()) corrupt(path, line_no, "node ids must be dense and ascending");
    if (f[2] == "S") {
      n.kind = NodeKind::Super;
    } else if (f[2] == "L") {
      n.kind = NodeKind::Leaf;
    } else {
      corrupt(path, line_no, "unknown node kind");
    }
    if (f[3] != "-") n.parent = SuperNodeId{static_cast<std::uint32_t>(id_field(f[3], path, line_no))};
    const std::string ctx = path.string() + ":" + std::to_string(line_no);
    auto listed = parse_csv(f[4], ctx);
    if (n.is_leaf()) {
      n.members.assign(listed.begin(), listed.end());
      if (!std::is_sorted(n.members.begin(), n.members.end())) corrupt(path, line_no, "members not sorted");
    } else {
      for (auto c : listed) n.children.push_back(SuperNodeId{static_cast<std::uint32_t>(c)});
    }
    auto open = parse_csv(f[5], ctx);
    n.open_nodes.assign(open.begin(), open.end());
    m.nodes.push_back(std::move(n));
  }
  if (m.nodes.empty() || m.nodes[0].parent) corrupt(path, line_no, "manifest has no root");
  for (const TreeNode& n : m.nodes) {
    for (SuperNodeId c : n.children) {
      if (c.value >= m.nodes.size() || m.nodes[c.value].parent != n.id) {
        corrupt(path, line_no, "child " + to_string(c) + " of " + to_string(n.id) + " disagrees on its parent");
      }
    }
    if (n.parent && n.parent->value >= m.nodes.size()) corrupt(path, line_no, "unknown parent id");
  }
  return m;
}

void write_superedge_file(const fs::path& path, std::span<const SuperEdge> superedges) {
  auto out = open_out(path);
  for (const SuperEdge& se : superedges) {
    for (const Edge& e : se.edges) {
      out << se.side_a.value << ' ' << se.side_b.value << ' ';
      write_edge(out, e);
      out << '\n';
    }
  }
  if (!out) fail(ErrorKind::Io, "write failure on " + path.string());
}

std::vector<SuperEdgeLine> read_superedge_lines(const fs::path& path) {
  auto in = open_in(path);
  std::vector<SuperEdgeLine> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto f = tokens(line);
    if (f.size() != 5) corrupt(path, line_no, "expected '<childA> <childB> <src> <dst> <w>'");
    SuperEdgeLine l;
    l.child_a = SuperNodeId{static_cast<std::uint32_t>(id_field(f[0], path, line_no))};
    l.child_b = SuperNodeId{static_cast<std::uint32_t>(id_field(f[1], path, line_no))};
    l.edge = edge_fields(f[2], f[3], f[4], path, line_no);
    out.push_back(l);
  }
  return out;
}

std::vector<SuperEdge> read_superedge_file(const fs::path& path, std::span<const SuperNodeId> children) {
  std::vector<SuperEdge> out;
  for (std::size_t i = 0; i < children.size(); ++i) {
    for (std::size_t j = i + 1; j < children.size(); ++j) out.push_back({children[i], children[j], {}});
  }
  for (const SuperEdgeLine& l : read_superedge_lines(path)) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const SuperEdge& se) { return se.side_a == l.child_a && se.side_b == l.child_b; });
    if (it == out.end()) {
      fail(ErrorKind::Invariant, path.string() + ": SuperEdge " + to_string(l.child_a) + "," + to_string(l.child_b) +
                                     " does not join two children");
    }
    it->edges.push_back(l.edge);
  }
  return out;
}

}  // namespace detail
}  // namespace gmine
