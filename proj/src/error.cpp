#include "resgcn/error.hpp"

namespace resgcn {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kShape: return "shape";
    case ErrorCode::kCapacity: return "capacity";
    case ErrorCode::kState: return "state";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kUndefinedMetric: return "undefined-metric";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace resgcn
