// roadtones command line: every subcommand prints JSON (or JSONL) on stdout
// and logs on stderr. Exit 0 on success, 1 on invalid input, 2 on provider
// or runtime failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "roadtones/bench.hpp"
#include "roadtones/config.hpp"
#include "roadtones/corpus.hpp"
#include "roadtones/dataset.hpp"
#include "roadtones/error.hpp"
#include "roadtones/proposals.hpp"
#include "roadtones/runtime.hpp"
#include "roadtones/service.hpp"
#include "roadtones/sft.hpp"
#include "roadtones/split.hpp"
#include "roadtones/text_util.hpp"

namespace rt = roadtones;

namespace {

struct GlobalFlags {
  std::string config;
  bool mock = false;
  std::string data_dir;
  std::string inventory;
  std::string log_level = "info";
  std::vector<std::string> mock_fail_tasks;
  std::vector<std::string> mock_fail_substrings;
};

int exit_code_for(rt::ErrorCode code) {
  if (rt::is_provider_error(code)) return 2;
  switch (code) {
    case rt::ErrorCode::kParseError:
    case rt::ErrorCode::kAllCandidatesFailed:
    case rt::ErrorCode::kIoError:
      return 2;
    default:
      return 1;
  }
}

void setup_logging(const std::string& level) {
  const char* no_color = std::getenv("NO_COLOR");
  const auto mode =
      no_color != nullptr && *no_color != '\0' ? spdlog::color_mode::never : spdlog::color_mode::automatic;
  auto logger = spdlog::stderr_color_mt("roadtones", mode);
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::from_str(level));
}

std::unique_ptr<rt::Runtime> make_runtime(const GlobalFlags& g) {
  rt::RuntimeOptions options;
  if (!g.config.empty()) options.config = rt::AppConfig::load(g.config);
  options.mock = g.mock;
  options.mock_options.failing_tasks.insert(g.mock_fail_tasks.begin(), g.mock_fail_tasks.end());
  options.mock_options.failing_substrings = g.mock_fail_substrings;
  if (!g.data_dir.empty()) options.data_dir = g.data_dir;
  if (!g.inventory.empty()) options.inventory = g.inventory;
  return std::make_unique<rt::Runtime>(std::move(options));
}

/// Text from an inline flag or a file flag; exactly one must be set.
std::string text_input(const std::string& inline_value, const std::string& file, const char* what) {
  if (!inline_value.empty() && !file.empty()) {
    throw rt::Error(rt::ErrorCode::kSchemaError, "cli", std::string("give --") + what + " or --" + what + "-file, not both");
  }
  if (!file.empty()) return std::string(rt::trim(rt::read_text_file(file)));
  if (inline_value.empty()) {
    throw rt::Error(rt::ErrorCode::kSchemaError, "cli", std::string("missing --") + what + " or --" + what + "-file");
  }
  return inline_value;
}

rt::ToneProfile read_spec(const std::string& path, const rt::AttributeInventory& inventory) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(rt::read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw rt::Error(rt::ErrorCode::kSchemaError, "cli", path + " is not valid JSON: " + e.what());
  }
  auto spec = rt::profile_from_wire(doc, rt::ProfileRole::kTarget);
  rt::validate_profile(spec, inventory);
  return spec;
}

void print_json(const nlohmann::ordered_json& doc) { std::cout << doc.dump(2) << '\n'; }

void write_jsonl(const std::string& path, const std::vector<nlohmann::ordered_json>& lines) {
  std::string body;
  for (const auto& line : lines) body += line.dump() + '\n';
  if (path.empty() || path == "-") {
    std::cout << body;
  } else {
    rt::write_text_file(path, body);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tone-controlled caption generation, scoring and dataset tooling"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "roadtones 0.1.0");

  GlobalFlags g;
  app.add_option("--config", g.config, "Application config (JSON)")->check(CLI::ExistingFile);
  app.add_flag("--mock", g.mock, "Use the deterministic offline provider for every model call");
  app.add_option("--data-dir", g.data_dir, "Directory with inventory.json, prompts/ and instructions/")
      ->check(CLI::ExistingDirectory);
  app.add_option("--inventory", g.inventory, "Attribute inventory file")->check(CLI::ExistingFile);
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  app.add_option("--mock-fail-task", g.mock_fail_tasks, "Mock: fail every call of this task")->group("");
  app.add_option("--mock-fail-substring", g.mock_fail_substrings, "Mock: fail calls whose prompt contains this")
      ->group("");

  // extract
  auto* extract = app.add_subcommand("extract", "Extract the tone profile of a caption");
  std::string caption, caption_file, summary, summary_file;
  bool propose = false;
  extract->add_option("--caption", caption);
  extract->add_option("--caption-file", caption_file)->check(CLI::ExistingFile);
  extract->add_option("--summary", summary);
  extract->add_option("--summary-file", summary_file)->check(CLI::ExistingFile);
  extract->add_flag("--propose", propose, "Queue a new style proposal when no style registers");

  // generate
  auto* generate = app.add_subcommand("generate", "Generate a caption for a tone spec");
  std::string spec_file, mode;
  int n = 0;
  generate->add_option("--summary", summary);
  generate->add_option("--summary-file", summary_file)->check(CLI::ExistingFile);
  generate->add_option("--spec", spec_file, "Tone spec (wire-form JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--mode", mode)->check(
      CLI::IsMember({"two_stage", "order_reversed", "single_stage", "style_only", "personality_only"}));
  generate->add_option("--n", n, "Candidates per stage")->check(CLI::Range(1, 64));

  // score
  auto* score = app.add_subcommand("score", "Score a caption against a tone spec");
  std::string scope = "full";
  score->add_option("--caption", caption);
  score->add_option("--caption-file", caption_file)->check(CLI::ExistingFile);
  score->add_option("--summary", summary);
  score->add_option("--summary-file", summary_file)->check(CLI::ExistingFile);
  score->add_option("--spec", spec_file)->required()->check(CLI::ExistingFile);
  score->add_option("--scope", scope)->check(CLI::IsMember({"full", "writing_style", "personality"}));

  // select-tones
  auto* select = app.add_subcommand("select-tones", "Retrieve neighbors and pick distinct tones for one video");
  std::string corpus_file, video_id;
  std::size_t k = 0, m = 0;
  select->add_option("--corpus", corpus_file)->required()->check(CLI::ExistingFile);
  select->add_option("--video-id", video_id)->required();
  select->add_option("--k", k)->check(CLI::PositiveNumber);
  select->add_option("--m", m)->check(CLI::PositiveNumber);

  // build-dataset
  auto* build = app.add_subcommand("build-dataset", "Run the per-video pipeline over a corpus");
  std::string out_file, report_file;
  std::size_t parallel = 0;
  build->add_option("--corpus", corpus_file)->required()->check(CLI::ExistingFile);
  build->add_option("--out", out_file, "Dataset JSONL (stdout when omitted)");
  build->add_option("--report", report_file, "Also write the build report here");
  build->add_option("--k", k)->check(CLI::PositiveNumber);
  build->add_option("--m", m)->check(CLI::PositiveNumber);
  build->add_option("--parallel", parallel, "Videos in flight")->check(CLI::PositiveNumber);
  build->add_option("--mode", mode)->check(
      CLI::IsMember({"two_stage", "order_reversed", "single_stage", "style_only", "personality_only"}));
  build->add_option("--n", n)->check(CLI::Range(1, 64));

  // split
  auto* split = app.add_subcommand("split", "Assign train/val/eval tags by video");
  std::string dataset_file;
  double train = 0.7, val = 0.2, eval = 0.1;
  std::uint64_t seed = 0;
  split->add_option("--dataset", dataset_file)->required()->check(CLI::ExistingFile);
  split->add_option("--out", out_file, "Tagged dataset JSONL (stdout when omitted)");
  split->add_option("--train", train);
  split->add_option("--val", val);
  split->add_option("--eval", eval);
  split->add_option("--seed", seed);

  // export-sft
  auto* sft = app.add_subcommand("export-sft", "Write instruction-tuning triplets");
  double cot_fraction = 0.25;
  bool no_summary = false;
  std::string split_filter;
  sft->add_option("--dataset", dataset_file)->required()->check(CLI::ExistingFile);
  sft->add_option("--out", out_file, "Triplet JSONL (stdout when omitted)");
  sft->add_option("--cot-fraction", cot_fraction)->check(CLI::Range(0.0, 1.0));
  sft->add_option("--seed", seed);
  sft->add_option("--split", split_filter, "Only records with this split tag")
      ->check(CLI::IsMember({"train", "val", "eval"}));
  sft->add_flag("--no-summary-triplets", no_summary);

  // bench
  auto* bench = app.add_subcommand("bench", "Score candidate captions against bench specs");
  std::string candidates_file, label, table_file;
  bench->add_option("--specs", spec_file)->required()->check(CLI::ExistingFile);
  bench->add_option("--candidates", candidates_file)->required()->check(CLI::ExistingFile);
  bench->add_option("--corpus", corpus_file, "Summaries for spec rows that lack one")->check(CLI::ExistingFile);
  bench->add_option("--label", label);
  bench->add_option("--table", table_file, "Write the text leaderboard here ('-' for stderr)");

  // review-styles
  auto* review = app.add_subcommand("review-styles", "List, approve or reject proposed writing styles");
  std::string approve, reject, queue_file;
  review->add_option("--queue", queue_file, "Proposal queue (JSONL)");
  auto* approve_opt = review->add_option("--approve", approve);
  review->add_option("--reject", reject)->excludes(approve_opt);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string listen = "127.0.0.1:8080", cors = "*";
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--cors-origin", cors);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  setup_logging(g.log_level);

  try {
    if (*review) {
      // Needs no providers.
      std::optional<std::filesystem::path> data_dir;
      if (!g.data_dir.empty()) data_dir = g.data_dir;
      const std::filesystem::path inventory_path =
          g.inventory.empty() ? rt::resolve_data_dir(data_dir) / "inventory.json" : std::filesystem::path(g.inventory);
      const std::filesystem::path queue =
          queue_file.empty() ? inventory_path.parent_path() / "style_proposals.jsonl" : std::filesystem::path(queue_file);
      if (approve.empty() && reject.empty()) {
        auto list = nlohmann::ordered_json::array();
        for (const auto& p : rt::ProposalQueue(queue).entries()) list.push_back(rt::to_json(p));
        print_json({{"queue", queue.string()}, {"proposals", list}});
      } else {
        const bool approving = !approve.empty();
        const auto outcome = rt::review_proposal(queue, inventory_path, approving ? approve : reject, approving);
        print_json({{"style", approving ? approve : reject},
                    {"decision", approving ? "approved" : "rejected"},
                    {"entries_updated", outcome.entries_updated},
                    {"inventory_changed", outcome.inventory_changed}});
      }
      return 0;
    }

    auto runtime = make_runtime(g);
    const auto& config = runtime->config();

    if (*extract) {
      const auto c = text_input(caption, caption_file, "caption");
      const auto s = text_input(summary, summary_file, "summary");
      const auto profile = runtime->extractor().extract_tone_profile(c, s);
      nlohmann::ordered_json doc = rt::to_wire(profile);
      if (propose) {
        try {
          const auto proposal = runtime->extractor().propose_style_candidate(c, s, profile.writing_style);
          rt::ProposalQueue(runtime->proposal_queue_path()).append(proposal);
          spdlog::info("queued style proposal '{}'", proposal.proposed_style);
        } catch (const rt::Error& e) {
          if (e.code() != rt::ErrorCode::kPreconditionFailed && e.code() != rt::ErrorCode::kDuplicateProposal) throw;
          spdlog::info("no style proposal: {}", e.what());
        }
      }
      print_json(doc);
    } else if (*generate) {
      const auto s = text_input(summary, summary_file, "summary");
      const auto spec = read_spec(spec_file, runtime->inventory());
      const auto generator = runtime->generator(
          mode.empty() ? std::nullopt : std::optional(rt::generation_mode_from_string(mode)),
          n > 0 ? std::optional(n) : std::nullopt);
      const auto doc = rt::generation_response_json(generator.generate(s, spec));
      print_json(doc);
    } else if (*score) {
      const auto c = text_input(caption, caption_file, "caption");
      const auto s = text_input(summary, summary_file, "summary");
      const auto spec = read_spec(spec_file, runtime->inventory());
      const auto scored =
          runtime->evaluator().score_caption(c, s, spec, rt::narrative_scope_from_string(scope));
      print_json(rt::to_json(scored.report));
    } else if (*select || *build) {
      auto options = config.dataset;
      if (k > 0) options.k = k;
      if (m > 0) options.m = m;
      if (parallel > 0) options.parallel = parallel;
      const auto corpus = rt::ingest_corpus(corpus_file);
      const auto generator = runtime->generator(
          mode.empty() ? std::nullopt : std::optional(rt::generation_mode_from_string(mode)),
          n > 0 ? std::optional(n) : std::nullopt);
      rt::DatasetBuilder builder(runtime->extractor(), generator, runtime->embedder(), options, &runtime->judge());
      if (*select) {
        print_json(rt::to_json(builder.select_tones(corpus, video_id)));
      } else {
        const auto output = builder.build(corpus);
        for (const auto& f : output.report.failures) {
          spdlog::warn("video {} skipped: {} ({}): {}", f.video_id, f.code, f.component, f.message);
        }
        const auto report = rt::to_json(output.report);
        if (!report_file.empty()) rt::write_text_file(report_file, report.dump(2) + "\n");
        if (out_file.empty() || out_file == "-") {
          std::cout << rt::dataset_to_jsonl(output.records);
          spdlog::info("{} records from {} of {} videos", output.report.records, output.report.succeeded,
                       output.report.videos);
        } else {
          rt::write_dataset(out_file, output.records);
          print_json(report);
        }
      }
    } else if (*split) {
      const auto tagged = rt::split_dataset(rt::read_dataset(dataset_file), {train, val, eval}, seed);
      std::map<std::string, std::set<std::string>> videos;
      for (const auto& r : tagged) videos[r.split].insert(r.video_id);
      nlohmann::ordered_json counts;
      for (const char* tag : {"train", "val", "eval"}) counts[tag] = videos[tag].size();
      if (out_file.empty() || out_file == "-") {
        std::cout << rt::dataset_to_jsonl(tagged);
        spdlog::info("split videos: {}", counts.dump());
      } else {
        rt::write_dataset(out_file, tagged);
        print_json({{"records", tagged.size()}, {"videos", counts}, {"seed", seed}});
      }
    } else if (*sft) {
      auto records = rt::read_dataset(dataset_file);
      if (!split_filter.empty()) {
        std::erase_if(records, [&](const rt::DatasetRecord& r) { return r.split != split_filter; });
      }
      rt::SftOptions options{cot_fraction, seed, !no_summary};
      const auto triplets = rt::export_sft(records, runtime->instructions(), options);
      std::vector<nlohmann::ordered_json> lines;
      std::size_t cot = 0;
      for (const auto& t : triplets) {
        cot += t.is_cot ? 1 : 0;
        lines.push_back(rt::to_json(t));
      }
      write_jsonl(out_file, lines);
      if (!out_file.empty() && out_file != "-") {
        print_json({{"triplets", triplets.size()}, {"tone_triplets", records.size()}, {"cot", cot}});
      }
    } else if (*bench) {
      std::map<std::string, std::string> summaries;
      if (!corpus_file.empty()) summaries = rt::summaries_by_id(rt::ingest_corpus(corpus_file));
      const auto report = rt::bench_score(rt::read_bench_rows(spec_file), rt::read_bench_rows(candidates_file),
                                          runtime->evaluator(), summaries, label);
      const auto table = rt::render_bench_table(report);
      if (table_file == "-") {
        std::cerr << table;
      } else if (!table_file.empty()) {
        rt::write_text_file(table_file, table);
      }
      print_json(rt::to_json(report));
    } else if (*serve) {
      const auto [host, port] = rt::parse_listen_address(listen);
      rt::ApiService service(*runtime, {cors});
      rt::HttpServer server(service);
      const int bound = server.bind(host, port);
      spdlog::info("listening on {}:{}", host, bound);
      server.listen();
    }
    return 0;
  } catch (const rt::Error& e) {
    spdlog::error("{}", e.what());
    std::cerr << rt::api_error_json(e).dump() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}
