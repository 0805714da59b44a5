#pragma once

#include <stdexcept>
#include <string>

namespace heq {

enum class ErrorCode {
  DimensionMismatch,
  InvalidPoint,
  InvalidArgument,
  DegenerateRay,
  SingularSystem,
  VariantMismatch,
  NonFinite,
  MissingData,
  Config,
  Io,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heq
