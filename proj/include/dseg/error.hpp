#pragma once

#include <stdexcept>
#include <string>

namespace dseg {

enum class ErrorCode {
  kInvalidInput,
  kInvalidConfiguration,
  kInvalidArgument,
  kOutOfBounds,
  kUpdateDegenerate,
  kDegenerateSegment,
  kIo,
  kSchema,
};

const char* to_string(ErrorCode code) noexcept;

/// Library-wide exception; `code()` lets callers (the CLI in particular) map
/// failures to exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dseg
