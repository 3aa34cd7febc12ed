#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mailscope/time.hpp"

namespace mailscope {

enum class ActionKind {
  load_dataset,
  add_filter,
  remove_filter,
  assign_tag,
  remove_node,
  remove_edge,
  undo_removal,
  clusterize,
};

std::string_view to_string(ActionKind k) noexcept;
std::optional<ActionKind> parse_action_kind(std::string_view name);

struct ActionEntry {
  std::uint64_t seq = 0;
  Timestamp ts{};
  ActionKind kind = ActionKind::load_dataset;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const ActionEntry&, const ActionEntry&) = default;
};

inline constexpr std::string_view kActionLogFormat = "mailscope-actions";
inline constexpr int kActionLogVersion = 1;

// Append-only record of session actions; seq runs 1, 2, 3, ...
class ActionLog {
 public:
  const ActionEntry& append(ActionKind kind, nlohmann::json payload, Timestamp ts);
  std::span<const ActionEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  // JSON lines: a header line {"format":...,"version":1} followed by one
  // {"kind","payload","seq","ts"} object per entry in seq order.
  std::string to_jsonl() const;
  // Throws Error(MalformedLog). Empty input yields an empty log.
  static ActionLog from_jsonl(std::string_view jsonl);

  friend bool operator==(const ActionLog&, const ActionLog&) = default;

 private:
  std::vector<ActionEntry> entries_;
};

}  // namespace mailscope
