#include <fstream>
#include <future>
#include <sstream>

#include <gtest/gtest.h>

#include "harness.hpp"
#include "mailscope/error.hpp"
#include "support.hpp"

namespace mailscope {
namespace {

using nlohmann::json;
using testing::fixture;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    harness_ = std::make_unique<testing::ServiceHarness>(WorkspaceConfig{.data_dir = dir_.path(), .cluster_doc_cap = 4});
    const auto up = h().upload(slurp(fixture("five.mbox")), "five.mbox", "mbox");
    ASSERT_EQ(up.status, 201) << up.body;
    dataset_ = up.json()["dataset_id"];
    const auto s = h().post("/sessions", {{"dataset_id", dataset_}});
    ASSERT_EQ(s.status, 201) << s.body;
    sid_ = s.json()["session_id"];
  }

  testing::ServiceHarness& h() { return *harness_; }
  std::string path(const std::string& tail) const { return "/sessions/" + sid_ + tail; }

  void expect_error(const testing::ServiceHarness::Reply& r, int status, const std::string& code) {
    EXPECT_EQ(r.status, status) << r.body;
    const json j = json::parse(r.body, nullptr, false);
    ASSERT_TRUE(j.is_object()) << r.body;
    EXPECT_EQ(j["status"], status);
    EXPECT_EQ(j["code"], code);
    EXPECT_TRUE(j["message"].is_string());
  }

  testing::TempDir dir_;
  std::unique_ptr<testing::ServiceHarness> harness_;
  std::string dataset_;
  std::string sid_;
};

TEST_F(ServiceTest, UploadAndList) {
  const auto list = h().get("/datasets");
  ASSERT_EQ(list.status, 200);
  ASSERT_EQ(list.json().size(), 1u);
  EXPECT_EQ(list.json()[0]["record_count"], 5);
  EXPECT_EQ(list.json()[0]["label"], "five.mbox");
}

TEST_F(ServiceTest, UploadErrors) {
  expect_error(h().upload("", "empty.mbox", "mbox"), 422, "EmptyCorpus");
  expect_error(h().upload("x", "x.bin", "pdf"), 400, "InvalidArgument");
}

TEST_F(ServiceTest, FreshSessionLogHasOneEntry) {
  const auto r = h().get(path("/actions"));
  ASSERT_EQ(r.status, 200);
  std::istringstream lines(r.body);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  ASSERT_EQ(all.size(), 2u);  // header + load_dataset
  EXPECT_EQ(json::parse(all[1])["kind"], "load_dataset");
}

TEST_F(ServiceTest, FilterNarrowsEveryPanel) {
  const auto before = h().get(path("/timeline?granularity=month")).json();
  const auto added = h().post(path("/filters"), {{"field", "content"}, {"value", "money"}});
  ASSERT_EQ(added.status, 200) << added.body;
  EXPECT_EQ(added.json()["count"], 2);
  EXPECT_EQ(added.json()["added"]["filter_id"], "f1");
  const std::string fp = added.json()["fingerprint"];
  const auto after = h().get(path("/timeline?granularity=month")).json();
  EXPECT_NE(after, before);
  std::uint64_t total = 0;
  for (const auto& b : after["bins"]) total += b["count"].get<std::uint64_t>();
  EXPECT_EQ(total, 2u);
  for (const char* panel : {"/timeline", "/correspondents", "/entities?k=3", "/graph", "/results"}) {
    const auto r = h().get(path(panel));
    ASSERT_EQ(r.status, 200) << panel << r.body;
    EXPECT_EQ(r.json()["fingerprint"], fp) << panel;
  }
  const auto removed = h().del(path("/filters/f1"));
  ASSERT_EQ(removed.status, 200);
  EXPECT_EQ(removed.json()["count"], 5);
  EXPECT_EQ(h().get(path("/timeline?granularity=month")).json(), before);
}

TEST_F(ServiceTest, ErrorMapping) {
  expect_error(h().del(path("/filters/f7")), 404, "UnknownFilter");
  expect_error(h().get("/sessions/s9999/graph"), 404, "UnknownSession");
  expect_error(h().post("/sessions", {{"dataset_id", "ds9999"}}), 404, "UnknownDataset");
  {
    const auto added = h().post(path("/filters"), {{"field", "content"}, {"value", "money"}});
    ASSERT_EQ(added.status, 200) << added.body;
  }
  expect_error(h().post(path("/filters"), {{"field", "content"}, {"value", "Money"}}), 409, "DuplicateFilter");
  expect_error(h().post(path("/filters"), {{"field", "colour"}, {"value", "red"}}), 400, "InvalidArgument");
  expect_error(h().post(path("/filters"), {{"field", "content"}, {"value", "two words"}}), 400, "InvalidFilter");
  expect_error(h().post(path("/cluster"), {{"k", 0}}), 422, "InvalidK");
  expect_error(h().post(path("/cluster"), {{"k", "two"}}), 400, "InvalidArgument");
  expect_error(h().post(path("/graph/undo"), json::object()), 422, "EmptyUndoStack");
  expect_error(h().post(path("/graph/remove"), {{"kind", "node"}, {"node", "zz@zz.com"}}), 404, "UnknownNode");
  expect_error(h().get(path("/timeline?granularity=week")), 400, "InvalidArgument");
  expect_error(h().get(path("/results?offset=-1")), 400, "InvalidArgument");
  expect_error(h().post("/tags", {{"term", "money"}, {"tag", " "}}), 400, "EmptyLabel");
  auto bad = h().client().Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
}

TEST_F(ServiceTest, EntitiesOnEmptyResultIs422) {
  ASSERT_EQ(h().post(path("/filters"), {{"field", "subject"}, {"value", "spam"}}).status, 200);
  expect_error(h().get(path("/entities?k=5")), 422, "EmptyResults");
  EXPECT_EQ(h().get(path("/correspondents")).json()["correspondents"], json::array());
}

TEST_F(ServiceTest, ClusterCapAndMembers) {
  expect_error(h().post(path("/cluster"), {{"k", 2}}), 422, "ClusterCapExceeded");
  ASSERT_EQ(h().post(path("/filters"), {{"field", "correspondent"}, {"value", "c@y.org"}}).status, 200);
  const auto c = h().post(path("/cluster"), {{"k", 2}, {"seed", 7}});
  ASSERT_EQ(c.status, 200) << c.body;
  EXPECT_EQ(c.json()["k"], 2);
  std::size_t total = 0;
  for (int i = 0; i < 2; ++i) {
    const auto m = h().get(path("/cluster/" + std::to_string(i) + "/members"));
    ASSERT_EQ(m.status, 200);
    total += m.json()["members"].size();
  }
  EXPECT_EQ(total, 2u);
  expect_error(h().get(path("/cluster/2/members")), 404, "IndexOutOfRange");
}

TEST_F(ServiceTest, GraphEditsAndExport) {
  const auto g = h().get(path("/graph")).json();
  const auto r = h().post(path("/graph/remove"), {{"kind", "edge"}, {"a", "b@x.com"}, {"b", "a@x.com"}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["undo_depth"], 1);
  const auto u = h().post(path("/graph/undo"), json::object());
  EXPECT_EQ(u.json(), g);
  const auto dot = h().get(path("/graph/export?format=dot"));
  EXPECT_EQ(dot.status, 200);
  EXPECT_EQ(dot.body.rfind("graph", 0), 0u);
}

TEST_F(ServiceTest, ResultsPaging) {
  const auto page = h().get(path("/results?offset=1&limit=2")).json();
  EXPECT_EQ(page["total"], 5);
  ASSERT_EQ(page["records"].size(), 2u);
  EXPECT_EQ(page["records"][0]["doc_id"], "d2");
  EXPECT_EQ(h().get(path("/results?offset=10")).json()["records"], json::array());
}

TEST_F(ServiceTest, IdempotentReads) {
  for (const char* panel : {"/results", "/correspondents", "/timeline?granularity=day", "/entities?k=4", "/graph",
                            "/actions"}) {
    EXPECT_EQ(h().get(path(panel)).body, h().get(path(panel)).body) << panel;
  }
  EXPECT_EQ(h().get("/tags/distribution").body, h().get("/tags/distribution").body);
}

TEST_F(ServiceTest, Tags) {
  const auto r = h().post("/tags", {{"term", "receipt"}, {"tag", "politics"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.json()["tags"], json::array({"politics"}));
  h().post("/tags", {{"term", "urgent"}, {"tag", "suspicious"}, {"session_id", sid_}});
  h().post("/tags", {{"term", "money"}, {"tag", "suspicious"}});
  EXPECT_EQ(h().get("/tags/distribution").json(),
            json::parse(R"([{"count":2,"tag":"suspicious"},{"count":1,"tag":"politics"}])"));
  EXPECT_EQ(h().get("/tags/receipt").json()["tags"], json::array({"politics"}));
  EXPECT_NE(h().get(path("/actions")).body.find("\"assign_tag\""), std::string::npos);
}

TEST_F(ServiceTest, ReplayEndpoint) {
  h().post(path("/filters"), {{"field", "content"}, {"value", "money"}});
  const auto log = h().get(path("/actions")).body;
  const auto r = h().post("/sessions/replay", {{"dataset_id", dataset_}, {"log", log}});
  ASSERT_EQ(r.status, 201) << r.body;
  EXPECT_EQ(r.json()["fingerprint"], h().get(path("")).json()["fingerprint"]);
  expect_error(h().post("/sessions/replay", {{"dataset_id", dataset_}, {"log", "garbage"}}), 400, "MalformedLog");
}

TEST_F(ServiceTest, Cors) {
  const auto r = h().client().Get("/datasets");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
  const auto o = h().client().Options("/sessions");
  ASSERT_TRUE(o);
  EXPECT_EQ(o->status, 204);
}

TEST_F(ServiceTest, ConcurrentSessions) {
  std::vector<std::string> sids;
  for (int i = 0; i < 4; ++i) sids.push_back(h().post("/sessions", {{"dataset_id", dataset_}}).json()["session_id"]);
  const auto port = h().client().port();
  std::vector<std::future<bool>> jobs;
  for (const auto& sid : sids) {
    jobs.push_back(std::async(std::launch::async, [sid, port] {
      httplib::Client c("127.0.0.1", port);
      bool ok = true;
      const std::vector<std::string> words = {"money", "transfer", "meeting"};
      for (std::size_t i = 0; i < words.size(); ++i) {
        auto r = c.Post("/sessions/" + sid + "/filters", json{{"field", "content"}, {"value", words[i]}}.dump(),
                        "application/json");
        ok = ok && r && r->status == 200;
        auto d = c.Delete("/sessions/" + sid + "/filters/f" + std::to_string(i + 1));
        ok = ok && d && d->status == 200;
      }
      return ok;
    }));
  }
  for (auto& j : jobs) EXPECT_TRUE(j.get());
  for (const auto& sid : sids) {
    const auto log = h().get("/sessions/" + sid + "/actions").body;
    EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 8);
  }
}

TEST(ErrorMapping, EveryCodeHasOneStatus) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::InvalidArgument); ++c) {
    const int s = http_status(static_cast<ErrorCode>(c));
    EXPECT_TRUE(s == 400 || s == 404 || s == 409 || s == 422 || s == 500) << c;
  }
  EXPECT_EQ(http_status(ErrorCode::DuplicateFilter), 409);
  EXPECT_EQ(http_status(ErrorCode::StorageFailure), 500);
  EXPECT_EQ(to_api_error(Error(ErrorCode::InvalidK, "k")).code, "InvalidK");
}

}  // namespace
}  // namespace mailscope
