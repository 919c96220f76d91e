// gmine: build, audit, query and serve hierarchical graph stores.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"

#include "gmine/audit.hpp"
#include "gmine/engine.hpp"
#include "gmine/error.hpp"
#include "gmine/graph.hpp"
#include "gmine/graph_tree.hpp"
#include "gmine/http_api.hpp"
#include "gmine/partitioner.hpp"
#include "gmine/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void print_audit(const gmine::AuditReport& r, std::ostream& out) {
  auto flag = [](bool ok) { return ok ? "ok" : "FAIL"; };
  out << "structure        " << flag(r.structure_ok) << '\n'
      << "checksums        " << flag(r.checksums_ok) << '\n'
      << "leaves disjoint  " << flag(r.disjoint_ok) << '\n'
      << "leaves cover V   " << flag(r.cover_ok) << '\n'
      << "edges stored     " << flag(r.edges_ok) << '\n'
      << "open nodes       " << flag(r.open_nodes_ok) << '\n'
      << "balance          " << flag(r.balance_ok) << " (achieved " << r.balance_achieved << ")\n"
      << "residual at root " << r.residual_at_root << '\n'
      << "leaves " << r.leaf_count << ", |V| " << r.vertex_count << ", |E| " << r.edge_count << " = "
      << r.internal_edges << " internal + " << r.cross_edges << " in SuperEdges\n";
  for (const std::string& d : r.details) out << "  " << d << '\n';
  out << (r.ok() ? "audit passed" : "audit FAILED") << '\n';
}

void print_query(const std::string& kind, const json& j, std::ostream& out) {
  if (kind == "closure") {
    out << j["nodes"].size() << " nodes\n";
    bool first = true;
    for (const auto& v : j["nodes"]) {
      out << (first ? "" : " ") << v.get<gmine::NodeId>();
      first = false;
    }
    out << '\n';
  } else if (kind == "conn") {
    out << "weight " << j["weight"].get<std::size_t>() << '\n';
    for (const auto& e : j["edges"]) {
      out << e[0].get<gmine::NodeId>() << '\t' << e[1].get<gmine::NodeId>();
      if (e[2].get<double>() != 1.0) out << '\t' << gmine::format_weight(e[2].get<double>());
      out << '\n';
    }
  } else if (kind == "external") {
    out << "node " << j["node"].get<gmine::NodeId>() << " (leaf " << j["leaf"].get<std::uint32_t>() << "): "
        << j["count"].get<std::size_t>() << " external neighbors\n";
    if (!j["entries"].empty()) out << "neighbor\tleaf\tresolved_at\tweight\n";
    for (const auto& e : j["entries"]) {
      out << e["neighbor"].get<gmine::NodeId>() << '\t' << e["neighbor_leaf"].get<std::uint32_t>() << '\t'
          << e["resolved_at"].get<std::uint32_t>() << '\t' << gmine::format_weight(e["edge"][2].get<double>()) << '\n';
    }
  } else if (kind == "search") {
    if (j["hits"].empty()) out << "no matches\n";
    for (const auto& h : j["hits"]) {
      out << h["node"].get<gmine::NodeId>() << '\t' << h["label"].get<std::string>() << "\tpath";
      for (const auto& p : h["path"]) out << ' ' << p.get<std::uint32_t>();
      out << '\n';
    }
  }
}

json run_query(gmine::QueryEngine& engine, const std::string& kind, const std::vector<std::string>& args) {
  auto need = [&](std::size_t n, const char* usage) {
    if (args.size() != n) gmine::fail(gmine::ErrorKind::BadInput, std::string("usage: query ") + usage);
  };
  if (kind == "closure") {
    need(1, "closure <supernode>");
    return engine.closure(engine.parse_supernode(args[0]));
  }
  if (kind == "conn") {
    need(2, "conn <supernode> <supernode>");
    return engine.connectivity(engine.parse_supernode(args[0]), engine.parse_supernode(args[1]));
  }
  if (kind == "external") {
    need(1, "external <node>");
    return engine.external(engine.parse_node(args[0]));
  }
  need(1, "search <label substring>");
  return engine.search(args[0]);
}

httplib::Server* g_server = nullptr;

void stop_server(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical graph store: build, audit, query, serve"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "partition a graph, fill and save the tree store, then audit it");
  std::string input, labels, out_dir, plan_path;
  std::size_t k = 0, levels = 0, min_leaf = 0;
  double epsilon = 0.10;
  std::uint64_t seed = 1;
  bool unweighted = false;
  build->add_option("--input", input, "edge list: src<TAB>dst[<TAB>weight]")->required();
  build->add_option("--labels", labels, "labels: id<TAB>label");
  build->add_option("--k", k, "fanout of each partitioning step")->required();
  build->add_option("--levels", levels, "number of tree levels")->required();
  build->add_option("--epsilon", epsilon, "balance tolerance")->capture_default_str();
  build->add_option("--seed", seed, "partitioner seed")->capture_default_str();
  build->add_option("--out", out_dir, "store directory")->required();
  build->add_option("--plan", plan_path, "use a manual hierarchy instead of partitioning");
  build->add_option("--min-leaf-size", min_leaf, "parts smaller than this are not split (default 2k)");
  build->add_flag("--unweighted", unweighted, "ignore edge weights when cutting");

  // audit
  auto* audit = app.add_subcommand("audit", "re-scan a store and check its invariants");
  std::string store;
  std::optional<double> audit_epsilon;
  audit->add_option("--store", store, "store directory")->required();
  audit->add_option("--epsilon", audit_epsilon, "also check every split against this balance tolerance");

  // query
  auto* query = app.add_subcommand("query", "closure <sn> | conn <sn> <sn> | external <node> | search <text>");
  std::string kind;
  std::vector<std::string> args;
  bool as_json = false;
  std::size_t query_cache = gmine::GraphTree::kDefaultCacheLeaves;
  query->add_option("kind", kind, "query kind")->required()->check(CLI::IsMember({"closure", "conn", "external", "search"}));
  query->add_option("args", args, "query arguments");
  query->add_option("--store", store, "store directory")->required();
  query->add_flag("--json", as_json, "print the JSON document served by the HTTP API");
  query->add_option("--cache-leaves", query_cache, "leaf cache capacity");

  // serve
  auto* serve = app.add_subcommand("serve", "serve the HTTP+JSON API");
  int port = 0;
  std::string host = "127.0.0.1";
  std::size_t cache_leaves = gmine::GraphTree::kDefaultCacheLeaves;
  serve->add_option("--store", store, "store directory")->required();
  serve->add_option("--port", port, "TCP port")->required()->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--cache-leaves", cache_leaves, "maximum simultaneously loaded leaves")->capture_default_str();

  // generate
  auto* generate = app.add_subcommand("generate", "write a synthetic graph with a planted community hierarchy");
  gmine::PlantedHierarchyOptions planted;
  std::string gen_out, gen_labels;
  generate->add_option("--nodes", planted.nodes)->required();
  generate->add_option("--edges", planted.edges)->required();
  generate->add_option("--k", planted.k)->capture_default_str();
  generate->add_option("--levels", planted.levels)->capture_default_str();
  generate->add_option("--seed", planted.seed)->capture_default_str();
  generate->add_option("--out", gen_out, "edge list output")->required();
  generate->add_option("--labels-out", gen_labels, "labels output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gmine::exit_code(gmine::ErrorKind::BadInput);
  }

  try {
    if (*build) {
      gmine::Graph g = gmine::load_graph(input, labels.empty() ? std::nullopt : std::optional<fs::path>(labels));
      gmine::HierarchySpec spec{k, levels, epsilon, min_leaf, !unweighted};
      spec.validate();
      gmine::HierarchyPlan plan;
      if (!plan_path.empty()) {
        std::ifstream in(plan_path);
        if (!in) gmine::fail(gmine::ErrorKind::Io, "cannot open plan " + plan_path);
        plan = gmine::read_plan(in, plan_path);
      } else {
        plan = gmine::build_hierarchy(g, spec, seed);
      }
      gmine::GraphTree tree = gmine::assemble_tree(g, plan, out_dir);
      gmine::FillReport fill = gmine::fill_graph_tree(tree);
      gmine::save_tree(tree);
      std::cout << "built " << out_dir << ": " << tree.leaves().size() << " leaves, " << tree.size()
                << " SuperNodes, " << fill.internal_edges << " leaf-internal + " << fill.cross_edges
                << " cross edges\n";
      gmine::AuditOptions opts;
      opts.original = &g;
      if (plan_path.empty()) opts.epsilon = epsilon;
      gmine::AuditReport report = gmine::audit_store(out_dir, opts);
      print_audit(report, std::cout);
      return report.ok() ? 0 : gmine::exit_code(gmine::ErrorKind::Invariant);
    }
    if (*audit) {
      if (!fs::is_directory(store)) gmine::fail(gmine::ErrorKind::Io, "no store at " + store);
      gmine::AuditOptions opts;
      opts.epsilon = audit_epsilon;
      gmine::AuditReport report = gmine::audit_store(store, opts);
      print_audit(report, std::cout);
      return report.ok() ? 0 : gmine::exit_code(gmine::ErrorKind::Invariant);
    }
    if (*query) {
      gmine::QueryEngine engine = gmine::QueryEngine::open(store, query_cache);
      json result = run_query(engine, kind, args);
      if (as_json) {
        std::cout << result.dump() << '\n';
      } else {
        print_query(kind, result, std::cout);
      }
      return 0;
    }
    if (*serve) {
      gmine::QueryEngine engine = gmine::QueryEngine::open(store, cache_leaves);
      gmine::AuditReport report = gmine::audit_store(store);
      if (!report.ok()) {
        print_audit(report, std::cerr);
        return gmine::exit_code(gmine::ErrorKind::Invariant);
      }
      httplib::Server server;
      gmine::register_routes(server, engine);
      if (!server.bind_to_port(host, port)) gmine::fail(gmine::ErrorKind::Io, "cannot bind " + host + ":" + std::to_string(port));
      g_server = &server;
      std::signal(SIGINT, stop_server);
      std::signal(SIGTERM, stop_server);
      std::cout << "serving " << store << " on http://" << host << ':' << port << std::endl;
      server.listen_after_bind();
      return 0;
    }
    if (*generate) {
      planted.labels = !gen_labels.empty();
      gmine::Graph g = gmine::planted_hierarchy_graph(planted);
      gmine::write_graph(g, fs::path(gen_out));
      if (planted.labels) {
        std::ofstream out(gen_labels);
        if (!out) gmine::fail(gmine::ErrorKind::Io, "cannot write " + gen_labels);
        gmine::write_labels(g, out);
      }
      std::cout << "wrote " << g.node_count() << " nodes, " << g.edge_count() << " edges to " << gen_out << '\n';
      return 0;
    }
  } catch (const gmine::Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return gmine::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gmine::exit_code(gmine::ErrorKind::Io);
  }
  return 0;
}
