#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace resgcn {

enum class ErrorCode {
  kIo,
  kParse,
  kDimensionMismatch,
  kInvalidInput,
  kInvalidArgument,
  kShape,
  kCapacity,
  kState,
  kNumeric,
  kConfig,
  kUndefinedMetric,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; `code()` says which contract failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace resgcn
