#pragma once

#include <stdexcept>
#include <string>

namespace eonspectra {

enum class ErrorCode {
  parse,
  duplicate_edge,
  nonpositive_weight,
  missing_node,
  invalid_argument,
  unreachable,
  guard_exceeded,
  internal,
};

const char* to_string(ErrorCode code);

// Every error raised by the library carries a code so callers (the CLI in
// particular) can tell input problems apart without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eonspectra
