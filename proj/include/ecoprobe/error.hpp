#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecoprobe {

// Stable machine-readable codes shared by the library, the HTTP API and the CLI.
enum class ErrorCode { invalid_input, not_found, conflict, internal };

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::internal: return "internal";
  }
  return "internal";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

[[noreturn]] inline void invalid(const std::string& message) {
  throw Error(ErrorCode::invalid_input, message);
}

}  // namespace ecoprobe
