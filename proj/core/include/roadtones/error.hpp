#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace roadtones {

/// Closed set of failure kinds. The service exposes these names verbatim as
/// `ApiError.code`, and the CLI maps them onto exit codes.
enum class ErrorCode {
  kIoError,
  kSchemaError,
  kRangeError,
  kUnknownAttribute,
  kParseError,
  kTemplateError,
  kPreconditionFailed,
  kDuplicateProposal,
  kDegenerateTarget,
  kUnknownVideo,
  kKTooLarge,
  kInventoryMismatch,
  kNotEnoughCandidates,
  kAllCandidatesFailed,
  kRatioError,
  kMissingProvenance,
  kRowMismatch,
  kNotFound,
  // Provider family.
  kProviderError,
  kAuthError,
  kRateLimited,
  kTimeout,
  kTransportError,
  kUpstreamError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for failures that originate at the model-service boundary.
bool is_provider_error(ErrorCode code) noexcept;

/// True for provider failures worth another attempt at a higher level:
/// transport failures, throttling and timeouts. HTTP status errors are
/// retried inside the client and are final once they surface.
bool is_transient(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string component, const std::string& message,
        std::string detail = {});

  ErrorCode code() const noexcept { return code_; }
  /// Module that raised the error, e.g. "extraction" or "providers".
  const std::string& component() const noexcept { return component_; }
  /// Machine-readable refinement, e.g. "range" for an out-of-range score.
  const std::string& detail() const noexcept { return detail_; }
  /// Extraction step (1-4) that failed, when raised inside the tone extractor.
  std::optional<int> step() const noexcept { return step_; }
  std::optional<int> http_status() const noexcept { return http_status_; }

  Error& with_step(int step) {
    step_ = step;
    return *this;
  }
  Error& with_http_status(int status) {
    http_status_ = status;
    return *this;
  }
  Error& with_component(std::string component) {
    component_ = std::move(component);
    return *this;
  }

 private:
  ErrorCode code_;
  std::string component_;
  std::string detail_;
  std::optional<int> step_;
  std::optional<int> http_status_;
};

}  // namespace roadtones
