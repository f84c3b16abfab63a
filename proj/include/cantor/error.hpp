#pragma once

#include <stdexcept>
#include <string>

namespace cantor {

// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
  invalid_argument,    // precondition or parameter violation
  insufficient_depth,  // finite truncation too coarse for the request
  internal,            // postcondition failure; always a bug
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_argument, what);
}

inline void ensure(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::internal, "internal assertion failed: " + what);
}

}  // namespace cantor
