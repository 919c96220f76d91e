#include "gmine/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "gmine/error.hpp"

namespace gmine {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::BadInput: return "bad_input";
    case ErrorKind::NotFound: return "not_found";
    case ErrorKind::AncestorPair: return "ancestor_pair";
    case ErrorKind::NotLeaf: return "not_leaf";
    case ErrorKind::NotLoaded: return "leaf_not_loaded";
    case ErrorKind::Invariant: return "invariant";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Invariant: return 2;
    case ErrorKind::Io: return 4;
    default: return 3;
  }
}

// ---------------------------------------------------------------------------
// Graph

std::optional<std::uint32_t> Graph::find(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t Graph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(ErrorKind::NotFound, "unknown node id " + std::to_string(id));
  return it->second;
}

std::optional<std::string_view> Graph::label(NodeId id) const {
  auto dense = find(id);
  if (!dense) return std::nullopt;
  return label_at(*dense);
}

std::optional<std::string_view> Graph::label_at(std::uint32_t dense) const {
  if (labels_.empty() || labels_[dense].empty()) return std::nullopt;
  return std::string_view(labels_[dense]);
}

double Graph::total_weight() const {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.weight;
  return sum;
}

Graph Graph::induced(std::span<const NodeId> members) const {
  GraphBuilder builder;
  builder.reserve(members.size(), members.size() * 4);
  std::vector<char> inside(ids_.size(), 0);
  for (NodeId id : members) {
    inside[index_of(id)] = 1;
    builder.add_node(id);
  }
  for (NodeId id : members) {
    std::uint32_t u = index_of(id);
    if (auto l = label_at(u)) builder.set_label(id, std::string(*l));
    for (const Incidence& inc : incident(u)) {
      if (inside[inc.neighbor] && id < ids_[inc.neighbor]) {
        const Edge& e = edges_[inc.edge];
        builder.add_edge(e.source, e.target, e.weight);
      }
    }
  }
  return std::move(builder).build();
}

// ---------------------------------------------------------------------------
// GraphBuilder

void GraphBuilder::reserve(std::size_t nodes, std::size_t edges) {
  nodes_.reserve(nodes);
  edges_.reserve(edges);
}

void GraphBuilder::add_node(NodeId id) { nodes_.push_back(id); }

void GraphBuilder::add_edge(NodeId a, NodeId b, double weight) {
  if (a == b) fail(ErrorKind::BadInput, "loop edge on node " + std::to_string(a));
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    fail(ErrorKind::BadInput, "non-positive weight on edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  edges_.push_back(Edge::canonical(a, b, weight));
}

void GraphBuilder::set_label(NodeId id, std::string label) {
  labels_.emplace_back(id, std::move(label));
}

Graph GraphBuilder::build() && {
  Graph g;

  std::vector<NodeId> ids = std::move(nodes_);
  ids.reserve(ids.size() + 2 * edges_.size() + labels_.size());
  for (const Edge& e : edges_) {
    ids.push_back(e.source);
    ids.push_back(e.target);
  }
  for (const auto& [id, _] : labels_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  g.ids_ = std::move(ids);
  g.index_.reserve(g.ids_.size());
  for (std::uint32_t i = 0; i < g.ids_.size(); ++i) g.index_.emplace(g.ids_[i], i);

  std::sort(edges_.begin(), edges_.end(), EdgeLess{});
  std::vector<Edge> merged;
  merged.reserve(edges_.size());
  for (const Edge& e : edges_) {
    if (!merged.empty() && merged.back().source == e.source && merged.back().target == e.target) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }
  g.edges_ = std::move(merged);
  edges_.clear();

  const std::size_t n = g.ids_.size();
  g.offsets_.assign(n + 1, 0);
  std::vector<std::uint32_t> src(g.edges_.size()), dst(g.edges_.size());
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    src[i] = g.index_.at(g.edges_[i].source);
    dst[i] = g.index_.at(g.edges_[i].target);
    ++g.offsets_[src[i] + 1];
    ++g.offsets_[dst[i] + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(g.offsets_[n]);
  std::vector<std::uint32_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (std::uint32_t i = 0; i < g.edges_.size(); ++i) {
    g.adjacency_[cursor[src[i]]++] = {dst[i], i};
    g.adjacency_[cursor[dst[i]]++] = {src[i], i};
  }
  for (std::size_t u = 0; u < n; ++u) {
    std::sort(g.adjacency_.begin() + g.offsets_[u], g.adjacency_.begin() + g.offsets_[u + 1],
              [](const Graph::Incidence& a, const Graph::Incidence& b) { return a.neighbor < b.neighbor; });
  }

  if (!labels_.empty()) {
    g.labels_.assign(n, std::string());
    for (auto& [id, label] : labels_) g.labels_[g.index_.at(id)] = std::move(label);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Text I/O

std::string format_weight(double w) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, end);
}

std::optional<double> parse_weight(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  if (!(value > 0.0) || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<NodeId> parse_node_id(std::string_view text) {
  NodeId value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return value;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool skippable(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

[[noreturn]] void malformed(std::string_view source, std::size_t line_no, const std::string& what) {
  fail(ErrorKind::BadInput, std::string(source) + ":" + std::to_string(line_no) + ": " + what);
}

void parse_edges_into(std::istream& in, GraphBuilder& builder, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim_cr(line);
    if (skippable(view)) continue;
    auto fields = split_fields(view);
    if (fields.size() < 2 || fields.size() > 3) malformed(source, line_no, "expected 'src<TAB>dst[<TAB>weight]'");
    auto a = parse_node_id(fields[0]);
    auto b = parse_node_id(fields[1]);
    if (!a || !b) malformed(source, line_no, "node ids must be non-negative integers");
    double w = 1.0;
    if (fields.size() == 3) {
      auto parsed = parse_weight(fields[2]);
      if (!parsed) malformed(source, line_no, "weight must be a positive decimal");
      w = *parsed;
    }
    if (*a == *b) malformed(source, line_no, "loop edge on node " + std::to_string(*a));
    builder.add_edge(*a, *b, w);
  }
  if (in.bad()) fail(ErrorKind::Io, "read failure in " + std::string(source));
}

}  // namespace

void parse_labels(std::istream& in, GraphBuilder& builder, std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim_cr(line);
    if (skippable(view)) continue;
    auto tab = view.find('\t');
    if (tab == std::string_view::npos) malformed(source, line_no, "expected 'id<TAB>label'");
    auto id = parse_node_id(view.substr(0, tab));
    if (!id) malformed(source, line_no, "node id must be a non-negative integer");
    builder.set_label(*id, std::string(view.substr(tab + 1)));
  }
  if (in.bad()) fail(ErrorKind::Io, "read failure in " + std::string(source));
}

Graph parse_edge_list(std::istream& in, std::string_view source_name) {
  GraphBuilder builder;
  parse_edges_into(in, builder, source_name);
  return std::move(builder).build();
}

Graph load_graph(const std::filesystem::path& edge_path,
                 const std::optional<std::filesystem::path>& labels_path) {
  std::ifstream edges(edge_path);
  if (!edges) fail(ErrorKind::Io, "cannot open edge list " + edge_path.string());
  GraphBuilder builder;
  parse_edges_into(edges, builder, edge_path.string());
  if (labels_path) {
    std::ifstream labels(*labels_path);
    if (!labels) fail(ErrorKind::Io, "cannot open labels file " + labels_path->string());
    parse_labels(labels, builder, labels_path->string());
  }
  return std::move(builder).build();
}

void write_graph(const Graph& g, std::ostream& out) {
  for (const Edge& e : g.edges()) {
    out << e.source << '\t' << e.target;
    if (e.weight != 1.0) out << '\t' << format_weight(e.weight);
    out << '\n';
  }
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  write_graph(g, out);
  if (!out) fail(ErrorKind::Io, "write failure on " + path.string());
}

void write_labels(const Graph& g, std::ostream& out) {
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    if (auto l = g.label_at(i)) out << g.id_at(i) << '\t' << *l << '\n';
  }
}

}  // namespace gmine
