#include "roadtones/proposals.hpp"

#include <fstream>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "extraction";

std::vector<StyleProposal> read_queue(const std::filesystem::path& path) {
  std::vector<StyleProposal> out;
  if (!std::filesystem::exists(path)) return out;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, std::string(kComponent), "cannot read " + path.string());
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      out.push_back(proposal_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  path.string() + ":" + std::to_string(number) + ": " + e.what(), std::to_string(number));
    }
  }
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const StyleProposal& proposal) {
  nlohmann::ordered_json doc;
  doc["caption_id"] = proposal.caption_id;
  doc["proposed_style"] = proposal.proposed_style;
  doc["rationale"] = proposal.rationale;
  doc["status"] = proposal.status;
  return doc;
}

StyleProposal proposal_from_json(const nlohmann::json& doc) {
  StyleProposal p;
  p.caption_id = doc.at("caption_id").get<std::string>();
  p.proposed_style = doc.at("proposed_style").get<std::string>();
  p.rationale = doc.value("rationale", "");
  p.status = doc.value("status", "pending");
  return p;
}

ProposalQueue::ProposalQueue(std::filesystem::path path) : path_(std::move(path)) {}

void ProposalQueue::append(const StyleProposal& proposal) {
  const std::string line = to_json(proposal).dump() + "\n";
  std::lock_guard lock(mutex_);
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out || !out.write(line.data(), static_cast<std::streamsize>(line.size()))) {
    throw Error(ErrorCode::kIoError, std::string(kComponent), "cannot append to " + path_.string());
  }
}

std::vector<StyleProposal> ProposalQueue::entries() const {
  std::lock_guard lock(mutex_);
  return read_queue(path_);
}

ReviewOutcome review_proposal(const std::filesystem::path& queue_path,
                              const std::filesystem::path& inventory_path, std::string_view style,
                              bool approve) {
  auto entries = read_queue(queue_path);
  ReviewOutcome outcome;
  std::string spelling;
  for (auto& e : entries) {
    if (e.status == "pending" && iequals(e.proposed_style, style)) {
      e.status = approve ? "approved" : "rejected";
      if (spelling.empty()) spelling = e.proposed_style;
      ++outcome.entries_updated;
    }
  }
  if (outcome.entries_updated == 0) {
    throw Error(ErrorCode::kNotFound, std::string(kComponent),
                "no pending proposal named \"" + std::string(style) + "\"");
  }

  if (approve) {
    const auto inventory = AttributeInventory::load(inventory_path);
    if (!inventory.canonical_style(spelling)) {
      const auto updated = inventory.with_style(spelling);
      write_text_file(inventory_path, updated.to_json().dump(2) + "\n");
      outcome.inventory_changed = true;
    }
  }

  std::string body;
  for (const auto& e : entries) body += to_json(e).dump() + "\n";
  write_text_file(queue_path, body);
  return outcome;
}

}  // namespace roadtones
