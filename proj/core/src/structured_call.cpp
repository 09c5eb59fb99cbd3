#include "roadtones/structured_call.hpp"

#include <cmath>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {

nlohmann::json parse_json_object(std::string_view text, std::string_view component) {
  std::string_view body = trim(text);
  if (body.starts_with("```")) {
    const auto first_newline = body.find('\n');
    const auto closing = body.rfind("```");
    if (first_newline != std::string_view::npos && closing > first_newline) {
      body = trim(body.substr(first_newline + 1, closing - first_newline - 1));
    }
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string(component),
                std::string("reply is not valid JSON: ") + e.what(), "json");
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParseError, std::string(component), "reply is not a JSON object", "json");
  }
  return doc;
}

nlohmann::json call_structured(ChatProvider& provider, ChatRequest request,
                               const ReplyValidator& validate, std::string_view component) {
  request.response_format = ResponseFormat::kJson;
  for (int round = 0;; ++round) {
    const auto reply = provider.complete(request);
    try {
      auto doc = parse_json_object(reply.text, component);
      if (validate) validate(doc);
      return doc;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParseError || round >= 1) throw;
      request.messages.push_back({"assistant", reply.text});
      request.messages.push_back(
          {"user", std::string("Your previous reply was rejected: ") + e.what() +
                       ". Reply again with only the corrected JSON object."});
    }
  }
}

double require_unit_interval(const nlohmann::json& value, std::string_view what,
                             std::string_view component) {
  if (!value.is_number()) {
    throw Error(ErrorCode::kParseError, std::string(component),
                std::string(what) + " is not a number", "type");
  }
  const double x = value.get<double>();
  if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
    throw Error(ErrorCode::kParseError, std::string(component),
                std::string(what) + " = " + format_double(x) + " is outside [0,1]", "range");
  }
  return x;
}

}  // namespace roadtones
