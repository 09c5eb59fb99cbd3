#include "roadtones/mock_provider.hpp"

#include <nlohmann/json.hpp>

#include "roadtones/mock_tone_model.hpp"
#include "roadtones/text_util.hpp"
#include "roadtones/tone_schema.hpp"

namespace roadtones {
namespace {

using nlohmann::json;

const std::string& need(const ChatRequest& request, const std::string& key) {
  const auto it = request.context.find(key);
  if (it == request.context.end()) {
    throw Error(ErrorCode::kProviderError, "providers",
                "mock provider: task '" + request.task + "' needs context '" + key + "'");
  }
  return it->second;
}

std::string opt(const ChatRequest& request, const std::string& key) {
  const auto it = request.context.find(key);
  return it == request.context.end() ? std::string() : it->second;
}

std::vector<std::string> names_from(const ChatRequest& request) {
  return json::parse(need(request, "names")).get<std::vector<std::string>>();
}

IntensityMap map_from(const std::string& text) {
  IntensityMap out;
  if (trim(text).empty()) return out;
  const json doc = json::parse(text);
  for (const auto& [k, v] : doc.items()) out[k] = v.get<double>();
  return out;
}

json map_json(const IntensityMap& map) {
  json out = json::object();
  for (const auto& [k, v] : map) out[k] = v;
  return out;
}

const char* yes_no(bool v) { return v ? "yes" : "no"; }

mock::CaptionPlan plan_from(const ChatRequest& request) {
  mock::CaptionPlan plan;
  plan.summary = need(request, "summary");
  const auto spec = json::parse(need(request, "spec"));
  const auto constraints_text = opt(request, "constraints");
  const json constraints = trim(constraints_text).empty() ? json::object() : json::parse(constraints_text);

  auto merge = [](IntensityMap& into, const json& doc, const char* key) {
    if (!doc.contains(key)) return;
    for (const auto& [k, v] : doc.at(key).items()) into[k] = v.get<double>();
  };
  merge(plan.personality, constraints, "Personality");
  merge(plan.writing_style, constraints, "Writing Style");
  merge(plan.personality, spec, "Personality");
  merge(plan.writing_style, spec, "Writing Style");

  const json& structural_doc = spec.contains("Structural Attributes") ? spec : constraints;
  if (structural_doc.contains("Structural Attributes")) {
    plan.structural = profile_from_wire(structural_doc).structural;
  }
  if (const auto wc = opt(request, "word_count"); !wc.empty()) {
    plan.structural.word_count = std::stoi(wc);
  }
  return plan;
}

}  // namespace

MockProvider::MockProvider(MockOptions options)
    : options_(std::move(options)), remaining_failures_(options_.transient_failures) {}

std::string MockProvider::tag() const {
  return "mock-hash-" + std::to_string(options_.embedding_dim);
}

std::string MockProvider::prompt_hash(const ChatRequest& request) {
  std::string buffer = request.model;
  for (const auto& m : request.messages) {
    buffer += '\x1f';
    buffer += m.role;
    buffer += '\x1e';
    buffer += m.content;
  }
  buffer += '\x1d';
  if (request.seed) buffer += std::to_string(*request.seed);
  return to_hex(fnv1a64(buffer));
}

std::vector<ChatRequest> MockProvider::requests() const {
  std::lock_guard lock(mutex_);
  return log_;
}

ChatResponse MockProvider::complete(const ChatRequest& request) {
  validate_request(request);
  ++calls_;
  {
    std::lock_guard lock(mutex_);
    log_.push_back(request);
    if (auto it = remaining_failures_.find(request.task); it != remaining_failures_.end() && it->second > 0) {
      --it->second;
      throw Error(options_.failure_code, "providers",
                  "mock provider: injected transient failure for '" + request.task + "'");
    }
  }
  for (const auto& needle : options_.failing_substrings) {
    for (const auto& m : request.messages) {
      if (m.content.find(needle) != std::string::npos) {
        throw Error(options_.failure_code, "providers",
                    "mock provider: injected failure for a prompt containing \"" + needle + "\"");
      }
    }
  }
  if (options_.failing_tasks.contains(request.task)) {
    throw Error(options_.failure_code, "providers",
                "mock provider: injected failure for '" + request.task + "'");
  }
  ChatResponse response;
  response.model = request.model;
  response.text = answer(request);
  return response;
}

std::string MockProvider::answer(const ChatRequest& request) const {
  if (const auto it = options_.fixtures.find(prompt_hash(request)); it != options_.fixtures.end()) {
    return it->second;
  }
  if (const auto it = options_.fixtures.find("task:" + request.task); it != options_.fixtures.end()) {
    return it->second;
  }

  try {
    const std::string& task = request.task;
    if (task == tasks::kExtractWritingStyle) {
      const auto names = names_from(request);
      return map_json(mock::score_attributes(need(request, "caption"), names, true)).dump();
    }
    if (task == tasks::kExtractPersonality) {
      const auto names = names_from(request);
      return map_json(mock::score_attributes(need(request, "caption"), names, false)).dump();
    }
    if (task == tasks::kExtractInformativeness) {
      return json{{"informativeness",
                   mock::informativeness(need(request, "caption"), need(request, "summary"))}}
          .dump();
    }
    if (task == tasks::kExtractStructural) {
      const auto flags = mock::structural_flags(need(request, "caption"));
      return json{{"Location", yes_no(flags.location)},
                  {"Date/Time", yes_no(flags.date_time)},
                  {"First-Person Perspective", yes_no(flags.first_person)}}
          .dump();
    }
    if (task == tasks::kProposeStyle) {
      const auto names = names_from(request);
      const auto style = mock::propose_style(names);
      return json{{"proposed_style", style},
                  {"rationale", "No listed style fits; the caption frames the event as a warning."}}
          .dump();
    }
    if (task == tasks::kJudgePersonality || task == tasks::kJudgeWritingStyle) {
      return json{{"score", mock::judge_agreement(map_from(need(request, "target")),
                                                  map_from(need(request, "extracted")))}}
          .dump();
    }
    if (task == tasks::kJudgeFactualConsistency) {
      return json{{"score", mock::factual_consistency(need(request, "caption"), need(request, "summary"))}}
          .dump();
    }
    if (task == tasks::kGenerateCaption) {
      return mock::compose_caption(plan_from(request), request.seed.value_or(0));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProviderError, "providers",
                "mock provider: bad context for '" + request.task + "': " + e.what());
  }
  throw Error(ErrorCode::kProviderError, "providers",
              "mock provider: no rule or fixture for task '" + request.task + "'");
}

std::vector<std::vector<double>> MockProvider::embed(std::span<const std::string> texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(mock::hash_embedding(t, options_.embedding_dim));
  return out;
}

}  // namespace roadtones
