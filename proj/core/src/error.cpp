#include "roadtones/error.hpp"

namespace roadtones {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kRangeError: return "RangeError";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kTemplateError: return "TemplateError";
    case ErrorCode::kPreconditionFailed: return "PreconditionFailed";
    case ErrorCode::kDuplicateProposal: return "DuplicateProposal";
    case ErrorCode::kDegenerateTarget: return "DegenerateTarget";
    case ErrorCode::kUnknownVideo: return "UnknownVideo";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kInventoryMismatch: return "InventoryMismatch";
    case ErrorCode::kNotEnoughCandidates: return "NotEnoughCandidates";
    case ErrorCode::kAllCandidatesFailed: return "AllCandidatesFailed";
    case ErrorCode::kRatioError: return "RatioError";
    case ErrorCode::kMissingProvenance: return "MissingProvenance";
    case ErrorCode::kRowMismatch: return "RowMismatch";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kProviderError: return "ProviderError";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kUpstreamError: return "UpstreamError";
  }
  return "Unknown";
}

bool is_provider_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kProviderError:
    case ErrorCode::kAuthError:
    case ErrorCode::kRateLimited:
    case ErrorCode::kTimeout:
    case ErrorCode::kTransportError:
    case ErrorCode::kUpstreamError:
      return true;
    default:
      return false;
  }
}

bool is_transient(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kProviderError:
    case ErrorCode::kRateLimited:
    case ErrorCode::kTimeout:
    case ErrorCode::kTransportError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, std::string component, const std::string& message,
             std::string detail)
    : std::runtime_error(message),
      code_(code),
      component_(std::move(component)),
      detail_(std::move(detail)) {}

}  // namespace roadtones
