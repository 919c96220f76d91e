#include "gmine/http_api.hpp"

#include <functional>

#include "httplib.h"

namespace gmine {

using nlohmann::json;

int http_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotFound: return 404;
    case ErrorKind::AncestorPair:
    case ErrorKind::NotLoaded: return 409;
    case ErrorKind::BadInput:
    case ErrorKind::NotLeaf: return 422;
    case ErrorKind::Invariant:
    case ErrorKind::Io: return 500;
  }
  return 500;
}

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

using Handler = std::function<json(const httplib::Request&)>;

httplib::Server::Handler wrap(Handler handler) {
  return [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
    try {
      send(res, 200, handler(req));
    } catch (const Error& e) {
      send(res, http_status(e.kind()), error_json(e.kind(), e.what()));
    } catch (const std::exception& e) {
      send(res, 500, error_json(ErrorKind::Io, e.what()));
    }
  };
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) fail(ErrorKind::BadInput, std::string("missing query parameter '") + name + "'");
  return req.get_param_value(name);
}

std::uint64_t numeric_param(const httplib::Request& req, const char* name, std::uint64_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string text = req.get_param_value(name);
  auto value = parse_node_id(text);
  if (!value) fail(ErrorKind::BadInput, std::string("malformed '") + name + "' parameter '" + text + "'");
  return *value;
}

// Each layout request runs synchronously on a server thread.
constexpr std::uint64_t kMaxLayoutIterations = 5000;

}  // namespace

void register_routes(httplib::Server& server, QueryEngine& engine) {
  QueryEngine* e = &engine;
  auto sn = [e](const httplib::Request& req) { return e->parse_supernode(req.matches[1].str()); };

  server.Get("/api/tree", wrap([e](const httplib::Request&) { return e->tree_summary(); }));
  server.Get(R"(/api/supernode/([^/]+))", wrap([e, sn](const httplib::Request& req) { return e->supernode(sn(req)); }));
  server.Get(R"(/api/supernode/([^/]+)/closure)",
             wrap([e, sn](const httplib::Request& req) { return e->closure(sn(req)); }));
  server.Get("/api/connectivity", wrap([e](const httplib::Request& req) {
               const SuperNodeId a = e->parse_supernode(required_param(req, "a"));
               const SuperNodeId b = e->parse_supernode(required_param(req, "b"));
               return e->connectivity(a, b);
             }));
  server.Get(R"(/api/node/([^/]+)/external)",
             wrap([e](const httplib::Request& req) { return e->external(e->parse_node(req.matches[1].str())); }));
  server.Get("/api/search", wrap([e](const httplib::Request& req) { return e->search(required_param(req, "label")); }));
  server.Post(R"(/api/leaf/([^/]+)/expand)", wrap([e, sn](const httplib::Request& req) { return e->expand(sn(req)); }));
  server.Post(R"(/api/leaf/([^/]+)/collapse)",
              wrap([e, sn](const httplib::Request& req) { return e->collapse(sn(req)); }));
  server.Get(R"(/api/leaf/([^/]+)/layout)", wrap([e, sn](const httplib::Request& req) {
               const SuperNodeId leaf = sn(req);
               const std::uint64_t iterations = numeric_param(req, "iterations", 300);
               if (iterations > kMaxLayoutIterations) {
                 fail(ErrorKind::BadInput, "iterations must be at most " + std::to_string(kMaxLayoutIterations));
               }
               return e->leaf_layout(leaf, numeric_param(req, "seed", 1), iterations);
             }));
  server.Get(R"(/api/leaf/([^/]+)/metrics)",
             wrap([e, sn](const httplib::Request& req) { return e->leaf_metrics(sn(req)); }));
  server.Get("/api/layout/hierarchy", wrap([e](const httplib::Request&) { return e->hierarchy_layout(); }));

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      send(res, 404, error_json(ErrorKind::NotFound, "no route for " + req.method + " " + req.path));
    }
  });
}

}  // namespace gmine
