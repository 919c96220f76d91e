#pragma once

#include "gmine/engine.hpp"
#include "gmine/error.hpp"

namespace httplib {
class Server;
}

namespace gmine {

/// HTTP status for an error kind: 404 unknown ids, 409 nested connectivity pairs
/// and unexpanded leaves, 422 malformed requests, 500 store problems.
int http_status(ErrorKind kind) noexcept;

/// Installs the /api routes on `server`. `engine` must outlive the server.
void register_routes(httplib::Server& server, QueryEngine& engine);

}  // namespace gmine
