#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadtones/judge.hpp"

namespace roadtones {

/// One line of a bench file: `{"video_id", "spec", "caption"?, "summary"?}`.
/// In the spec file `caption` is the reference; in a candidate file it is
/// the caption under test.
struct BenchRow {
  std::string video_id;
  ToneProfile spec;
  std::optional<std::string> caption;
  std::optional<std::string> summary;
};

/// Throws Error(kSchemaError) with the line number as detail.
std::vector<BenchRow> read_bench_rows(const std::filesystem::path& path);
std::vector<BenchRow> parse_bench_rows(const std::string& jsonl);

/// Leaderboard columns, all in percent.
struct BenchColumns {
  double p = 0.0;
  double ws = 0.0;
  double nas = 0.0;
  double a = 0.0;   // 1 - mean binary-attribute error
  double i = 0.0;   // 1 - e_I
  double wc = 0.0;  // 1 - e_len
  double sas = 0.0;
  double tas = 0.0;
  double fc = 0.0;
  double overall = 0.0;
};

BenchColumns bench_columns(const ScoreReport& report);

struct BenchEntry {
  std::string video_id;
  std::string caption;
  ScoreReport report;
  BenchColumns columns;
};

struct BenchReport {
  std::string label;
  std::vector<BenchEntry> rows;  // spec-file order
  BenchColumns means;
};

/// Scores one candidate caption per spec row. Rows pair up on
/// (video_id, serialize_spec(spec)); a spec row without a candidate, a
/// candidate without a spec row, or a repeated key throws Error(kRowMismatch)
/// naming the video. The summary comes from the spec row, else `summaries`.
BenchReport bench_score(const std::vector<BenchRow>& spec_rows, const std::vector<BenchRow>& candidates,
                        const CaptionEvaluator& evaluator,
                        const std::map<std::string, std::string>& summaries = {}, std::string label = {});

nlohmann::ordered_json to_json(const BenchColumns& columns);
nlohmann::ordered_json to_json(const BenchReport& report);

/// Fixed-width leaderboard: header, one line per row, then the means.
std::string render_bench_table(const BenchReport& report);

}  // namespace roadtones
