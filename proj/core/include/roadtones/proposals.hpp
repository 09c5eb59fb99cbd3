#pragma once

#include <filesystem>
#include <mutex>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadtones/extraction.hpp"

namespace roadtones {

nlohmann::ordered_json to_json(const StyleProposal& proposal);
StyleProposal proposal_from_json(const nlohmann::json& doc);

/// Append-only JSONL file of style proposals. Appends from one queue object
/// are serialized; each line is written with a single write call.
class ProposalQueue {
 public:
  explicit ProposalQueue(std::filesystem::path path);

  void append(const StyleProposal& proposal);
  /// All entries in file order; a missing file reads as empty.
  std::vector<StyleProposal> entries() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
};

struct ReviewOutcome {
  int entries_updated = 0;
  bool inventory_changed = false;
};

/// Marks every pending entry naming `style` (case-insensitive) as approved
/// or rejected. Approval appends the style to the inventory file unless it
/// is already there. Throws Error(kNotFound) if no pending entry names it.
ReviewOutcome review_proposal(const std::filesystem::path& queue_path,
                              const std::filesystem::path& inventory_path, std::string_view style,
                              bool approve);

}  // namespace roadtones
