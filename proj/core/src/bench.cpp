#include "roadtones/bench.hpp"

#include <array>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr const char* kComponent = "dataset";

std::optional<std::string> optional_string(const nlohmann::json& doc, const char* key, std::size_t line) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  if (!doc[key].is_string()) {
    throw Error(ErrorCode::kSchemaError, kComponent, std::string("bench field '") + key + "' must be a string",
                std::to_string(line));
  }
  return doc[key].get<std::string>();
}

std::string row_key(const std::string& video_id, const ToneProfile& spec) {
  return video_id + '\x1f' + serialize_spec(spec);
}

constexpr std::array<const char*, 10> kColumnNames = {"P",   "WS",  "NAS", "A",  "I",
                                                      "wc", "SAS", "TAS", "FC", "Overall"};

std::array<double, 10> as_array(const BenchColumns& c) {
  return {c.p, c.ws, c.nas, c.a, c.i, c.wc, c.sas, c.tas, c.fc, c.overall};
}

}  // namespace

std::vector<BenchRow> parse_bench_rows(const std::string& jsonl) {
  std::vector<BenchRow> rows;
  std::istringstream in(jsonl);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaError, kComponent, std::string("bench line is not JSON: ") + e.what(),
                  std::to_string(number));
    }
    if (!doc.is_object() || !doc.contains("video_id") || !doc["video_id"].is_string() ||
        doc["video_id"].get<std::string>().empty() || !doc.contains("spec")) {
      throw Error(ErrorCode::kSchemaError, kComponent, "bench line needs a video_id and a spec",
                  std::to_string(number));
    }
    BenchRow row;
    row.video_id = doc["video_id"].get<std::string>();
    try {
      row.spec = profile_from_wire(doc["spec"], ProfileRole::kTarget);
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaError, kComponent, std::string("bench spec: ") + e.what(),
                  std::to_string(number));
    }
    row.caption = optional_string(doc, "caption", number);
    row.summary = optional_string(doc, "summary", number);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BenchRow> read_bench_rows(const std::filesystem::path& path) {
  return parse_bench_rows(read_text_file(path));
}

BenchColumns bench_columns(const ScoreReport& r) {
  const double attr_sum = std::accumulate(r.attr_errors.begin(), r.attr_errors.end(), 0.0);
  BenchColumns c;
  c.p = 100.0 * r.s_p.value_or(0.0);
  c.ws = 100.0 * r.s_w.value_or(0.0);
  c.nas = 100.0 * r.nas;
  c.a = 100.0 * (1.0 - attr_sum / static_cast<double>(r.attr_errors.size()));
  c.i = 100.0 * (1.0 - r.e_i);
  c.wc = 100.0 * (1.0 - r.e_len);
  c.sas = 100.0 * r.sas;
  c.tas = 100.0 * r.tas;
  c.fc = 100.0 * r.fc;
  c.overall = 100.0 * r.overall;
  return c;
}

BenchReport bench_score(const std::vector<BenchRow>& spec_rows, const std::vector<BenchRow>& candidates,
                        const CaptionEvaluator& evaluator, const std::map<std::string, std::string>& summaries,
                        std::string label) {
  std::map<std::string, const BenchRow*> by_key;
  for (const auto& c : candidates) {
    if (!c.caption) {
      throw Error(ErrorCode::kRowMismatch, kComponent, "candidate row for " + c.video_id + " has no caption",
                  c.video_id);
    }
    if (!by_key.emplace(row_key(c.video_id, c.spec), &c).second) {
      throw Error(ErrorCode::kRowMismatch, kComponent, "duplicate candidate row for " + c.video_id, c.video_id);
    }
  }

  std::map<std::string, bool> seen;
  for (const auto& s : spec_rows) {
    const auto key = row_key(s.video_id, s.spec);
    if (!seen.emplace(key, true).second) {
      throw Error(ErrorCode::kRowMismatch, kComponent, "duplicate spec row for " + s.video_id, s.video_id);
    }
    if (!by_key.count(key)) {
      throw Error(ErrorCode::kRowMismatch, kComponent, "no candidate caption for " + s.video_id, s.video_id);
    }
  }
  for (const auto& [key, row] : by_key) {
    if (!seen.count(key)) {
      throw Error(ErrorCode::kRowMismatch, kComponent, "candidate row for " + row->video_id + " has no spec row",
                  row->video_id);
    }
  }

  BenchReport report;
  report.label = std::move(label);
  std::array<double, 10> sums{};
  for (const auto& s : spec_rows) {
    const BenchRow& cand = *by_key.at(row_key(s.video_id, s.spec));
    std::string summary;
    if (s.summary) {
      summary = *s.summary;
    } else if (auto it = summaries.find(s.video_id); it != summaries.end()) {
      summary = it->second;
    } else {
      throw Error(ErrorCode::kRowMismatch, kComponent, "no summary for " + s.video_id, s.video_id);
    }
    auto scored = evaluator.score_caption(*cand.caption, summary, s.spec, NarrativeScope::kFull);
    BenchEntry entry{s.video_id, *cand.caption, scored.report, bench_columns(scored.report)};
    const auto values = as_array(entry.columns);
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += values[i];
    report.rows.push_back(std::move(entry));
  }

  if (!report.rows.empty()) {
    const double n = static_cast<double>(report.rows.size());
    auto& m = report.means;
    m = {sums[0] / n, sums[1] / n, sums[2] / n, sums[3] / n, sums[4] / n,
         sums[5] / n, sums[6] / n, sums[7] / n, sums[8] / n, sums[9] / n};
  }
  return report;
}

nlohmann::ordered_json to_json(const BenchColumns& columns) {
  nlohmann::ordered_json doc;
  const auto values = as_array(columns);
  for (std::size_t i = 0; i < values.size(); ++i) doc[kColumnNames[i]] = values[i];
  return doc;
}

nlohmann::ordered_json to_json(const BenchReport& report) {
  nlohmann::ordered_json doc;
  doc["label"] = report.label;
  doc["count"] = report.rows.size();
  doc["means"] = to_json(report.means);
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["video_id"] = r.video_id;
    row["caption"] = r.caption;
    row["columns"] = to_json(r.columns);
    row["report"] = to_json(r.report);
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

std::string render_bench_table(const BenchReport& report) {
  std::size_t id_width = 8;
  for (const auto& r : report.rows) id_width = std::max(id_width, r.video_id.size());

  std::string out;
  char cell[32];
  auto emit_row = [&](const std::string& name, const BenchColumns& c) {
    out += name + std::string(id_width - std::min(id_width, name.size()), ' ');
    for (double v : as_array(c)) {
      std::snprintf(cell, sizeof cell, " %8.2f", v);
      out += cell;
    }
    out += '\n';
  };

  out += "video_id" + std::string(id_width - 8, ' ');
  for (const char* name : kColumnNames) {
    std::snprintf(cell, sizeof cell, " %8s", name);
    out += cell;
  }
  out += '\n';
  out += std::string(id_width + 9 * kColumnNames.size(), '-') + '\n';
  for (const auto& r : report.rows) emit_row(r.video_id, r.columns);
  out += std::string(id_width + 9 * kColumnNames.size(), '-') + '\n';
  emit_row("mean", report.means);
  return out;
}

}  // namespace roadtones
