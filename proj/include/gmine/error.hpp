#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gmine {

enum class ErrorKind {
  BadInput,        // malformed files, bad arguments
  NotFound,        // unknown node / SuperNode id
  AncestorPair,    // connectivity asked for nested SuperNodes
  NotLeaf,         // leaf-only operation on a SuperNode
  NotLoaded,       // leaf must be expanded first
  Invariant,       // structural invariant violated (corrupt store, residual at root)
  Io,              // unreadable / unwritable files
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

/// CLI exit code for an error kind: 2 invariant failure, 3 bad input, 4 I/O.
int exit_code(ErrorKind kind) noexcept;

}  // namespace gmine
