#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace roadtones {

struct CorpusRecord {
  std::string video_id;
  std::string summary;
  std::optional<std::string> source_caption;
  nlohmann::json meta = nlohmann::json::object();
};

/// Reads JSONL `{"video_id", "summary", "caption"?, ...}`; any other keys are
/// kept in `meta`. Throws Error(kIoError) or Error(kSchemaError) whose detail
/// is the 1-based line number, for a malformed line, an empty id or summary,
/// or a repeated id.
std::vector<CorpusRecord> ingest_corpus(const std::filesystem::path& path);

/// Video id to summary.
std::map<std::string, std::string> summaries_by_id(const std::vector<CorpusRecord>& corpus);

}  // namespace roadtones
