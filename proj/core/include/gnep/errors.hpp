#pragma once

#include <stdexcept>
#include <string>

namespace gnep {

// Failure categories; the CLI maps them onto exit codes
// (InvalidInput -> 1, IterationCap -> 2, PreconditionMissing -> 3).
enum class ErrorKind {
  InvalidInput,
  IterationCap,
  PreconditionMissing,
  Unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace gnep
