#include "roadtones/config.hpp"

#include <initializer_list>
#include <set>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr const char* kComponent = "config";

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw Error(ErrorCode::kSchemaError, kComponent, where + ": " + message, where);
}

void expect_object(const nlohmann::json& doc, const std::string& where,
                   std::initializer_list<const char*> allowed) {
  if (!doc.is_object()) fail(where, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : doc.items()) {
    if (!keys.count(item.key())) fail(where, "unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read(const nlohmann::json& doc, const char* key, T& out, const std::string& where) {
  if (!doc.contains(key)) return;
  const auto& v = doc[key];
  const std::string at = where + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail(at, "expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) fail(at, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<long long>() < 0) fail(at, "must not be negative");
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) fail(at, "expected a number");
  } else {
    if (!v.is_string()) fail(at, "expected a string");
  }
  out = v.get<T>();
}

void read_ms(const nlohmann::json& doc, const char* key, std::chrono::milliseconds& out, const std::string& where) {
  long long ms = out.count();
  read(doc, key, ms, where);
  out = std::chrono::milliseconds(ms);
}

void read_path(const nlohmann::json& doc, const char* key, std::optional<std::filesystem::path>& out) {
  std::string value;
  if (!doc.contains(key)) return;
  read(doc, key, value, "config");
  out = value;
}

ProviderConfig provider_from_json(const std::string& name, const nlohmann::json& doc) {
  const std::string where = "providers." + name;
  expect_object(doc, where,
                {"base_url", "api_key_env", "timeout_ms", "retry", "rate_limit", "embedding_model",
                 "embedding_batch_size"});
  ProviderConfig p;
  p.name = name;
  read(doc, "base_url", p.base_url, where);
  read(doc, "api_key_env", p.api_key_env, where);
  read_ms(doc, "timeout_ms", p.timeout, where);
  read(doc, "embedding_model", p.embedding_model, where);
  read(doc, "embedding_batch_size", p.embedding_batch_size, where);
  if (doc.contains("retry")) {
    const auto& r = doc["retry"];
    expect_object(r, where + ".retry", {"max_attempts", "initial_backoff_ms", "max_backoff_ms", "jitter"});
    read(r, "max_attempts", p.retry.max_attempts, where + ".retry");
    read_ms(r, "initial_backoff_ms", p.retry.initial_backoff, where + ".retry");
    read_ms(r, "max_backoff_ms", p.retry.max_backoff, where + ".retry");
    read(r, "jitter", p.retry.jitter, where + ".retry");
  }
  if (doc.contains("rate_limit")) {
    const auto& r = doc["rate_limit"];
    expect_object(r, where + ".rate_limit", {"requests", "interval_ms"});
    read(r, "requests", p.rate_limit.requests, where + ".rate_limit");
    read_ms(r, "interval_ms", p.rate_limit.interval, where + ".rate_limit");
  }
  if (p.embedding_batch_size == 0) fail(where + ".embedding_batch_size", "must be positive");
  try {
    p.validate();
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return p;
}

nlohmann::ordered_json provider_to_json(const ProviderConfig& p) {
  nlohmann::ordered_json doc;
  doc["base_url"] = p.base_url;
  doc["api_key_env"] = p.api_key_env;
  doc["timeout_ms"] = p.timeout.count();
  doc["retry"] = {{"max_attempts", p.retry.max_attempts},
                  {"initial_backoff_ms", p.retry.initial_backoff.count()},
                  {"max_backoff_ms", p.retry.max_backoff.count()},
                  {"jitter", p.retry.jitter}};
  doc["rate_limit"] = {{"requests", p.rate_limit.requests}, {"interval_ms", p.rate_limit.interval.count()}};
  doc["embedding_model"] = p.embedding_model;
  doc["embedding_batch_size"] = p.embedding_batch_size;
  return doc;
}

}  // namespace

AppConfig AppConfig::defaults() {
  AppConfig config;
  ProviderConfig openai;
  openai.name = "openai";
  config.providers.emplace("openai", openai);
  return config;
}

AppConfig AppConfig::from_json(const nlohmann::json& doc) {
  expect_object(doc, "config",
                {"providers", "extraction", "judge", "generation", "embedding", "dataset", "data_dir", "inventory",
                 "proposal_queue"});
  AppConfig c = defaults();
  if (doc.contains("providers")) {
    if (!doc["providers"].is_object() || doc["providers"].empty()) {
      fail("providers", "expected a non-empty object");
    }
    c.providers.clear();
    for (const auto& item : doc["providers"].items()) {
      c.providers.emplace(item.key(), provider_from_json(item.key(), item.value()));
    }
  }
  if (doc.contains("extraction")) {
    const auto& s = doc["extraction"];
    expect_object(s, "extraction",
                  {"provider", "model", "temperature", "top_p", "max_tokens", "proposal_threshold"});
    read(s, "provider", c.extraction_provider, "extraction");
    read(s, "model", c.extraction.model, "extraction");
    read(s, "temperature", c.extraction.temperature, "extraction");
    read(s, "top_p", c.extraction.top_p, "extraction");
    read(s, "max_tokens", c.extraction.max_tokens, "extraction");
    read(s, "proposal_threshold", c.extraction.proposal_threshold, "extraction");
  }
  if (doc.contains("judge")) {
    const auto& s = doc["judge"];
    expect_object(s, "judge", {"provider", "model", "temperature", "top_p", "max_tokens"});
    read(s, "provider", c.judge_provider, "judge");
    read(s, "model", c.judge.model, "judge");
    read(s, "temperature", c.judge.temperature, "judge");
    read(s, "top_p", c.judge.top_p, "judge");
    read(s, "max_tokens", c.judge.max_tokens, "judge");
  }
  if (doc.contains("generation")) {
    const auto& s = doc["generation"];
    expect_object(s, "generation",
                  {"provider", "model", "temperature", "top_p", "max_tokens", "n", "mode", "fc_floor", "parallel"});
    read(s, "provider", c.generation_provider, "generation");
    read(s, "model", c.generation.model, "generation");
    read(s, "temperature", c.generation.temperature, "generation");
    read(s, "top_p", c.generation.top_p, "generation");
    read(s, "max_tokens", c.generation.max_tokens, "generation");
    read(s, "n", c.generation.n, "generation");
    read(s, "fc_floor", c.generation.fc_floor, "generation");
    read(s, "parallel", c.generation.parallel, "generation");
    std::string mode(to_string(c.generation.mode));
    read(s, "mode", mode, "generation");
    c.generation.mode = generation_mode_from_string(mode);
  }
  if (doc.contains("embedding")) {
    const auto& s = doc["embedding"];
    expect_object(s, "embedding", {"provider"});
    read(s, "provider", c.embedding_provider, "embedding");
  }
  if (doc.contains("dataset")) {
    const auto& s = doc["dataset"];
    expect_object(s, "dataset", {"k", "m", "parallel", "structural_weight", "judge_distance"});
    read(s, "k", c.dataset.k, "dataset");
    read(s, "m", c.dataset.m, "dataset");
    read(s, "parallel", c.dataset.parallel, "dataset");
    read(s, "structural_weight", c.dataset.dissimilarity.structural_weight, "dataset");
    read(s, "judge_distance", c.dataset.judge_distance, "dataset");
  }
  read_path(doc, "data_dir", c.data_dir);
  read_path(doc, "inventory", c.inventory);
  read_path(doc, "proposal_queue", c.proposal_queue);
  c.validate();
  return c;
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, kComponent, path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

void AppConfig::validate() const {
  for (const auto& [section, name] : std::initializer_list<std::pair<const char*, const std::string&>>{
           {"extraction", extraction_provider},
           {"judge", judge_provider},
           {"generation", generation_provider},
           {"embedding", embedding_provider}}) {
    if (!providers.count(name)) fail(std::string(section) + ".provider", "undeclared provider '" + name + "'");
  }
  try {
    extraction.validate();
    judge.validate();
    generation.validate(true);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaError, kComponent, e.what(), e.detail());
  }
  if (dataset.k < 1 || dataset.m < 1 || dataset.parallel < 1) fail("dataset", "k, m and parallel must be >= 1");
  if (!(dataset.dissimilarity.structural_weight >= 0.0 && dataset.dissimilarity.structural_weight <= 1.0)) {
    fail("dataset.structural_weight", "must be in [0,1]");
  }
}

const ProviderConfig& AppConfig::provider(const std::string& name) const {
  const auto it = providers.find(name);
  if (it == providers.end()) fail("providers", "undeclared provider '" + name + "'");
  return it->second;
}

nlohmann::ordered_json to_json(const AppConfig& c) {
  nlohmann::ordered_json doc;
  auto providers = nlohmann::ordered_json::object();
  for (const auto& [name, p] : c.providers) providers[name] = provider_to_json(p);
  doc["providers"] = std::move(providers);
  doc["extraction"] = {{"provider", c.extraction_provider},
                       {"model", c.extraction.model},
                       {"temperature", c.extraction.temperature},
                       {"top_p", c.extraction.top_p},
                       {"max_tokens", c.extraction.max_tokens},
                       {"proposal_threshold", c.extraction.proposal_threshold}};
  doc["judge"] = {{"provider", c.judge_provider},
                  {"model", c.judge.model},
                  {"temperature", c.judge.temperature},
                  {"top_p", c.judge.top_p},
                  {"max_tokens", c.judge.max_tokens}};
  doc["generation"] = {{"provider", c.generation_provider},
                       {"model", c.generation.model},
                       {"temperature", c.generation.temperature},
                       {"top_p", c.generation.top_p},
                       {"max_tokens", c.generation.max_tokens},
                       {"n", c.generation.n},
                       {"mode", std::string(to_string(c.generation.mode))},
                       {"fc_floor", c.generation.fc_floor},
                       {"parallel", c.generation.parallel}};
  doc["embedding"] = {{"provider", c.embedding_provider}};
  doc["dataset"] = {{"k", c.dataset.k},
                    {"m", c.dataset.m},
                    {"parallel", c.dataset.parallel},
                    {"structural_weight", c.dataset.dissimilarity.structural_weight},
                    {"judge_distance", c.dataset.judge_distance}};
  if (c.data_dir) doc["data_dir"] = c.data_dir->string();
  if (c.inventory) doc["inventory"] = c.inventory->string();
  if (c.proposal_queue) doc["proposal_queue"] = c.proposal_queue->string();
  return doc;
}

}  // namespace roadtones
