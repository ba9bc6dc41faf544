#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heatlab {

enum class ErrorCode {
  AsymmetricWeights,
  NegativeWeight,
  SelfLoop,
  NonpositiveMeasure,
  NonsummableWeights,
  UnknownVertex,
  NonpositiveTime,
  DisconnectedGraph,
  VertexOutsideExhaustion,
  GraphMismatch,
  EigensolverNoConvergence,
  EmptyGrid,
  ZeroKernel,
  NTruncationExceeded,
  VertexNotInK,
  TruncationNotConverged,
  InvalidArgument,
  ConfigError,
  InputError,
  AssertionFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure class
/// and `what()` names the offending vertex, pair, or field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heatlab
