#include "mailscope/action_log.hpp"

#include "mailscope/error.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

std::string_view to_string(ActionKind k) noexcept {
  switch (k) {
    case ActionKind::load_dataset: return "load_dataset";
    case ActionKind::add_filter: return "add_filter";
    case ActionKind::remove_filter: return "remove_filter";
    case ActionKind::assign_tag: return "assign_tag";
    case ActionKind::remove_node: return "remove_node";
    case ActionKind::remove_edge: return "remove_edge";
    case ActionKind::undo_removal: return "undo_removal";
    case ActionKind::clusterize: return "clusterize";
  }
  return "load_dataset";
}

std::optional<ActionKind> parse_action_kind(std::string_view name) {
  for (const auto k : {ActionKind::load_dataset, ActionKind::add_filter, ActionKind::remove_filter,
                       ActionKind::assign_tag, ActionKind::remove_node, ActionKind::remove_edge,
                       ActionKind::undo_removal, ActionKind::clusterize}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

const ActionEntry& ActionLog::append(ActionKind kind, nlohmann::json payload, Timestamp ts) {
  entries_.push_back(ActionEntry{entries_.size() + 1, ts, kind, std::move(payload)});
  return entries_.back();
}

std::string ActionLog::to_jsonl() const {
  std::string out = nlohmann::json{{"format", kActionLogFormat}, {"version", kActionLogVersion}}.dump();
  out += '\n';
  for (const auto& e : entries_) {
    out += nlohmann::json{{"seq", e.seq}, {"ts", format_iso8601(e.ts)}, {"kind", to_string(e.kind)}, {"payload", e.payload}}
               .dump();
    out += '\n';
  }
  return out;
}

ActionLog ActionLog::from_jsonl(std::string_view jsonl) {
  ActionLog log;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (std::string_view line : text::split_lines(jsonl)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail(ErrorCode::MalformedLog, "not a JSON object" + where);
    if (!header_seen) {
      if (j.value("format", "") != kActionLogFormat) fail(ErrorCode::MalformedLog, "missing action log header" + where);
      if (j.value("version", 0) != kActionLogVersion) {
        fail(ErrorCode::MalformedLog, "unsupported action log version" + where);
      }
      header_seen = true;
      continue;
    }
    try {
      ActionEntry e;
      e.seq = j.at("seq").get<std::uint64_t>();
      const auto ts = parse_iso8601(j.at("ts").get<std::string>());
      const auto kind = parse_action_kind(j.at("kind").get<std::string>());
      if (!ts || !kind) fail(ErrorCode::MalformedLog, "bad ts or kind" + where);
      e.ts = *ts;
      e.kind = *kind;
      e.payload = j.at("payload");
      if (!e.payload.is_object()) fail(ErrorCode::MalformedLog, "payload must be an object" + where);
      if (e.seq != log.entries_.size() + 1) fail(ErrorCode::MalformedLog, "sequence numbers must run 1, 2, 3, ..." + where);
      log.entries_.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorCode::MalformedLog, std::string(ex.what()) + where);
    }
  }
  return log;
}

}  // namespace mailscope
