#pragma once

#include <functional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "roadtones/provider.hpp"

namespace roadtones {

/// Parses a reply that must be one JSON object, optionally wrapped in a
/// Markdown code fence. Throws Error(kParseError, detail "json").
nlohmann::json parse_json_object(std::string_view text, std::string_view component);

/// Rejects a parsed reply by throwing Error(kParseError).
using ReplyValidator = std::function<void(const nlohmann::json&)>;

/// Sends `request` and returns the first reply that parses and validates.
/// A rejected reply earns one repair round: the reply and a correction note
/// are appended to the conversation and the request is sent again. The
/// second rejection is thrown as is. Provider errors pass through untouched.
nlohmann::json call_structured(ChatProvider& provider, ChatRequest request,
                               const ReplyValidator& validate, std::string_view component);

/// Throws Error(kParseError, detail "range") unless `value` is a number in
/// [0,1]; returns it otherwise.
double require_unit_interval(const nlohmann::json& value, std::string_view what,
                             std::string_view component);

}  // namespace roadtones
