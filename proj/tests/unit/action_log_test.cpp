#include <gtest/gtest.h>

#include "mailscope/action_log.hpp"
#include "mailscope/error.hpp"
#include "mailscope/time.hpp"

namespace mailscope {
namespace {

Timestamp at(const char* iso) { return *parse_iso8601(iso); }

TEST(ActionLog, SequenceNumbers) {
  ActionLog log;
  log.append(ActionKind::load_dataset, {{"dataset_id", "ds0001"}}, at("2004-01-01T00:00:00Z"));
  log.append(ActionKind::add_filter, {{"filter_id", "f1"}}, at("2004-01-01T00:00:01Z"));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log.entries()[0].seq, 1u);
  EXPECT_EQ(log.entries()[1].seq, 2u);
}

TEST(ActionLog, JsonlRoundTrip) {
  ActionLog log;
  log.append(ActionKind::load_dataset, {{"dataset_id", "ds0001"}}, at("2004-01-01T00:00:00Z"));
  log.append(ActionKind::undo_removal, nlohmann::json::object(), at("2004-01-01T00:00:05Z"));
  const std::string text = log.to_jsonl();
  EXPECT_EQ(text.substr(0, text.find('\n')), R"({"format":"mailscope-actions","version":1})");
  EXPECT_EQ(ActionLog::from_jsonl(text), log);
  EXPECT_EQ(ActionLog::from_jsonl(text).to_jsonl(), text);
}

TEST(ActionLog, EmptyInput) { EXPECT_TRUE(ActionLog::from_jsonl("").empty()); }

TEST(ActionLog, Malformed) {
  const auto code = [](std::string_view text) {
    try {
      ActionLog::from_jsonl(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::StorageFailure;
  };
  const std::string header = "{\"format\":\"mailscope-actions\",\"version\":1}\n";
  EXPECT_EQ(code("{\"format\":\"other\",\"version\":1}\n"), ErrorCode::MalformedLog);
  EXPECT_EQ(code(header + "not json\n"), ErrorCode::MalformedLog);
  EXPECT_EQ(code(header + R"({"kind":"explode","payload":{},"seq":1,"ts":"2004-01-01T00:00:00Z"})" "\n"),
            ErrorCode::MalformedLog);
  EXPECT_EQ(code(header + R"({"kind":"load_dataset","payload":{},"seq":2,"ts":"2004-01-01T00:00:00Z"})" "\n"),
            ErrorCode::MalformedLog);
  EXPECT_EQ(code(header + R"({"kind":"load_dataset","payload":{},"seq":1,"ts":"whenever"})" "\n"),
            ErrorCode::MalformedLog);
}

TEST(ActionKind, Names) {
  for (const auto k : {ActionKind::load_dataset, ActionKind::add_filter, ActionKind::remove_filter, ActionKind::assign_tag,
                       ActionKind::remove_node, ActionKind::remove_edge, ActionKind::undo_removal, ActionKind::clusterize}) {
    EXPECT_EQ(parse_action_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_action_kind("nope"));
}

}  // namespace
}  // namespace mailscope
