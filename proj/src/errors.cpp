#include "heatlab/errors.hpp"

namespace heatlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AsymmetricWeights: return "AsymmetricWeights";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::NonpositiveMeasure: return "NonpositiveMeasure";
    case ErrorCode::NonsummableWeights: return "NonsummableWeights";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::NonpositiveTime: return "NonpositiveTime";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::VertexOutsideExhaustion: return "VertexOutsideExhaustion";
    case ErrorCode::GraphMismatch: return "GraphMismatch";
    case ErrorCode::EigensolverNoConvergence: return "EigensolverNoConvergence";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::ZeroKernel: return "ZeroKernel";
    case ErrorCode::NTruncationExceeded: return "NTruncationExceeded";
    case ErrorCode::VertexNotInK: return "VertexNotInK";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InputError: return "InputError";
    case ErrorCode::AssertionFailed: return "AssertionFailed";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace heatlab
