#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regionsim {

// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  InvalidInput = 2,
  Unreachable = 3,
  Io = 4,
  Internal = 5,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace regionsim
