#include "roadtones/provider.hpp"

#include "roadtones/error.hpp"

namespace roadtones {

void validate_request(const ChatRequest& request) {
  if (request.messages.empty()) {
    throw Error(ErrorCode::kPreconditionFailed, "providers", "chat request has no messages");
  }
  if (!(request.temperature >= 0.0)) {
    throw Error(ErrorCode::kPreconditionFailed, "providers", "temperature must be >= 0");
  }
}

}  // namespace roadtones
