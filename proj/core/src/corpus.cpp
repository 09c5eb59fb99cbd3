#include "roadtones/corpus.hpp"

#include <fstream>
#include <set>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "dataset";

[[noreturn]] void line_error(const std::filesystem::path& path, int line, const std::string& message) {
  throw Error(ErrorCode::kSchemaError, std::string(kComponent),
              path.string() + ":" + std::to_string(line) + ": " + message, std::to_string(line));
}

}  // namespace

std::vector<CorpusRecord> ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, std::string(kComponent), "cannot read " + path.string());

  std::vector<CorpusRecord> out;
  std::set<std::string> ids;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      line_error(path, number, std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) line_error(path, number, "expected a JSON object");
    if (!doc.contains("video_id") || !doc["video_id"].is_string()) {
      line_error(path, number, "missing string field \"video_id\"");
    }
    if (!doc.contains("summary") || !doc["summary"].is_string()) {
      line_error(path, number, "missing string field \"summary\"");
    }
    CorpusRecord r;
    r.video_id = doc["video_id"].get<std::string>();
    r.summary = doc["summary"].get<std::string>();
    if (trim(r.video_id).empty()) line_error(path, number, "empty video_id");
    if (trim(r.summary).empty()) line_error(path, number, "empty summary for " + r.video_id);
    if (doc.contains("caption") && !doc["caption"].is_null()) {
      if (!doc["caption"].is_string()) line_error(path, number, "\"caption\" must be a string");
      const auto caption = doc["caption"].get<std::string>();
      if (!trim(caption).empty()) r.source_caption = caption;
    }
    if (!ids.insert(r.video_id).second) line_error(path, number, "duplicate video_id " + r.video_id);
    for (const auto& [key, value] : doc.items()) {
      if (key != "video_id" && key != "summary" && key != "caption") r.meta[key] = value;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, std::string> summaries_by_id(const std::vector<CorpusRecord>& corpus) {
  std::map<std::string, std::string> out;
  for (const auto& r : corpus) out.emplace(r.video_id, r.summary);
  return out;
}

}  // namespace roadtones
