#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infprod {

enum class ErrorKind {
  InvalidArgument,
  Validation,
  Parse,
  UnsupportedTail,
  InvalidTolerance,
  Undetermined,
  NotStraddling,
  NotTailEquivalent,
  StraddleNotFound,
  NotFinitistic,
  PurificationFailed,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets callers branch
/// without a class hierarchy.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace infprod
