#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "mailscope/error.hpp"
#include "mailscope/ingest.hpp"
#include "mailscope/store.hpp"
#include "mailscope/time.hpp"
#include "support.hpp"

namespace mailscope {
namespace {

using testing::fixture;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::StorageFailure;
}

ParseResult mbox(const std::string& text) {
  std::istringstream in(text);
  return parse_mbox(in);
}

TEST(ParseMbox, EmptyStreamIsEmptyCorpus) {
  EXPECT_EQ(code_of([] { mbox(""); }), ErrorCode::EmptyCorpus);
}

TEST(ParseEml, MinimalMessage) {
  std::istringstream in("From: a@x.com\nTo: b@y.com\n\nhi\n");
  const auto r = parse_eml(in);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].sender.canonical(), "a@x.com");
  ASSERT_EQ(r.records[0].recipients.size(), 1u);
  EXPECT_EQ(r.records[0].recipients[0].canonical(), "b@y.com");
  EXPECT_EQ(r.records[0].body, "hi");
  EXPECT_EQ(r.records[0].doc_id, DocId(1));
  EXPECT_EQ(r.records[0].source_format, SourceFormat::eml);
}

TEST(ParseMbox, ThreeMessageFixture) {
  const auto r = parse_path(fixture("three.mbox"), SourceFormat::mbox);
  ASSERT_EQ(r.records.size(), 3u);
  EXPECT_EQ(r.skipped, 0u);
  EXPECT_TRUE(r.records[0].timestamp.has_value());
  EXPECT_TRUE(r.records[1].timestamp.has_value());
  EXPECT_FALSE(r.records[2].timestamp.has_value());
  EXPECT_EQ(r.records[0].sender.canonical(), "alice@example.com");
  EXPECT_EQ(r.records[0].sender.display_name(), "Alice Wong");
  EXPECT_EQ(r.records[1].recipients.size(), 2u);
  EXPECT_EQ(r.records[2].subject, "transfer schedule");
  for (const auto& rec : r.records) EXPECT_EQ(validate(rec), std::nullopt);
}

TEST(ParseMbox, FoldedHeadersAndEncodedSubject) {
  const auto r = mbox(
      "From x Mon Jan  1 00:00:00 2001\n"
      "From: a@x.com\n"
      "To: b@y.com,\n"
      "\tc@y.com\n"
      "Subject: =?utf-8?Q?caf=C3=A9?=\n"
      "  folded\n"
      "\n"
      "body\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].recipients.size(), 2u);
  EXPECT_EQ(r.records[0].subject, "caf\xC3\xA9 folded");
}

TEST(ParseMbox, QuotedFromLinesStayInBody) {
  const auto r = mbox(
      "From x Mon Jan  1 00:00:00 2001\n"
      "From: a@x.com\nTo: b@y.com\n\n"
      "first line\n"
      ">From the archive\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].body, "first line\nFrom the archive");
}

TEST(ParseMbox, SkipsMessagesWithoutUsableAddresses) {
  const auto r = mbox(
      "From x Mon Jan  1 00:00:00 2001\nFrom: nobody\nTo: b@y.com\n\nlost\n\n"
      "From x Mon Jan  1 00:00:00 2001\nFrom: a@x.com\nTo: b@y.com\n\nkept\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.total(), 2u);
  EXPECT_EQ(r.records[0].body, "kept");
}

TEST(ParseMbox, MultipartPrefersPlainText) {
  const auto r = mbox(
      "From x Mon Jan  1 00:00:00 2001\n"
      "From: a@x.com\nTo: b@y.com\n"
      "MIME-Version: 1.0\n"
      "Content-Type: multipart/alternative; boundary=\"BOUND\"\n\n"
      "preamble\n"
      "--BOUND\n"
      "Content-Type: text/html\n\n"
      "<p>html version</p>\n"
      "--BOUND\n"
      "Content-Type: text/plain; charset=utf-8\n"
      "Content-Transfer-Encoding: base64\n\n"
      "cGxhaW4gdmVyc2lvbg==\n"
      "--BOUND--\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].body, "plain version");
}

TEST(ParseMbox, HtmlOnlyIsStripped) {
  const auto r = mbox(
      "From x Mon Jan  1 00:00:00 2001\n"
      "From: a@x.com\nTo: b@y.com\nContent-Type: text/html\n\n"
      "<html><body><b>wire</b> the funds</body></html>\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_NE(r.records[0].body.find("wire"), std::string::npos);
  EXPECT_EQ(r.records[0].body.find('<'), std::string::npos);
}

TEST(ParseMbox, Latin1BodyIsTranscoded) {
  const auto r = mbox(
      "From x Mon Jan  1 00:00:00 2001\n"
      "From: a@x.com\nTo: b@y.com\nContent-Type: text/plain; charset=iso-8859-1\n\n"
      "caf\xE9\n");
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].body, "caf\xC3\xA9");
}

TEST(ParseTabular, TwoRowFixture) {
  const SchemaMap map = {
      {"sender", "from"}, {"recipients", "to"}, {"subject", "subject"}, {"body", "body"}, {"timestamp", "date"}};
  const auto r = parse_path(fixture("two_rows.csv"), SourceFormat::csv, map);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].body, "First body, with comma");
  EXPECT_EQ(r.records[1].body, "Second \"quoted\" body");
  EXPECT_EQ(r.records[1].recipients.size(), 2u);
  EXPECT_EQ(format_iso8601(*r.records[1].timestamp), "2004-01-06T00:00:00Z");
  EXPECT_EQ(r.records[0].source_format, SourceFormat::csv);
}

TEST(ParseTabular, AutoDetectsCommonHeaders) {
  const auto r = parse_path(fixture("two_rows.csv"), SourceFormat::csv);
  EXPECT_EQ(r.records.size(), 2u);
}

TEST(ParseTabular, MissingColumn) {
  std::istringstream in("from,to,body\na@x.com,b@y.com,hi\n");
  EXPECT_EQ(code_of([&] { parse_tabular(in, {{"sender", "sender_email"}, {"body", "body"}}); }),
            ErrorCode::MissingColumn);
}

TEST(ParseTabular, InvalidSenderRowIsSkipped) {
  std::istringstream in("from,to,body\nnot-an-address,b@y.com,hi\na@x.com,b@y.com,ok\n");
  const auto r = parse_tabular(in, {{"sender", "from"}, {"recipients", "to"}, {"body", "body"}});
  EXPECT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.records[0].doc_id, DocId(1));
}

TEST(ParseTabular, UnknownFieldIsRejected) {
  std::istringstream in("from,to,body\na@x.com,b@y.com,hi\n");
  EXPECT_EQ(code_of([&] { parse_tabular(in, {{"sender", "from"}, {"colour", "to"}, {"body", "body"}}); }),
            ErrorCode::InvalidArgument);
}

TEST(ParseCsv, QuotedNewlines) {
  const auto rows = detail::parse_csv("a,b\r\n\"x\ny\",\"z\"\"\"\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x\ny");
  EXPECT_EQ(rows[1][1], "z\"");
}

TEST(ParseJsonl, FieldsAndBadLines) {
  std::istringstream in(
      "{\"sender\":\"a@x.com\",\"recipients\":[\"b@y.com\"],\"subject\":\"s\",\"body\":\"b\",\"timestamp\":\"2004-01-01\"}\n"
      "not json\n"
      "{\"sender\":\"c@x.com\",\"recipients\":\"d@y.com, e@y.com\",\"body\":\"b2\"}\n");
  const auto r = parse_jsonl(in);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.records[1].recipients.size(), 2u);
  EXPECT_FALSE(r.records[1].timestamp.has_value());
}

TEST(ParseEml, Directory) {
  testing::TempDir dir;
  std::ofstream(dir.path() / "b.eml") << "From: b@x.com\nTo: c@y.com\n\nsecond\n";
  std::ofstream(dir.path() / "a.eml") << "From: a@x.com\nTo: c@y.com\n\nfirst\n";
  std::ofstream(dir.path() / "notes.txt") << "ignored";
  const auto r = parse_path(dir.path(), SourceFormat::eml);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].body, "first");
}

std::vector<EmailRecord> empty_bodied(std::size_t n) {
  std::vector<EmailRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(testing::make_record(static_cast<std::uint32_t>(i + 1), "a@x.com", {"b@y.com"}, "s", ""));
  }
  return out;
}

TEST(Synthesize, SingleBodyPool) {
  const std::vector<std::string> pool = {"the only body"};
  const auto out = synthesize_corpus(empty_bodied(3), pool, 1);
  for (const auto& r : out) {
    EXPECT_EQ(r.body, "the only body");
    EXPECT_TRUE(r.synthetic_body);
  }
}

TEST(Synthesize, Deterministic) {
  const std::vector<std::string> pool = {"p1", "p2", "p3"};
  EXPECT_EQ(synthesize_corpus(empty_bodied(10), pool, 42), synthesize_corpus(empty_bodied(10), pool, 42));
}

TEST(Synthesize, SeedsDiffer) {
  const std::vector<std::string> pool = {"p1", "p2", "p3", "p4"};
  const auto a = synthesize_corpus(empty_bodied(10), pool, 7);
  const auto b = synthesize_corpus(empty_bodied(10), pool, 8);
  bool differ = false;
  for (std::size_t i = 0; i < a.size(); ++i) differ = differ || a[i].body != b[i].body;
  EXPECT_TRUE(differ);
}

TEST(Synthesize, KeepsExistingBodiesAndRejectsEmptyPool) {
  auto recs = empty_bodied(2);
  recs[0].body = "original";
  const std::vector<std::string> pool = {"filled"};
  const auto out = synthesize_corpus(recs, pool, 0);
  EXPECT_EQ(out[0].body, "original");
  EXPECT_FALSE(out[0].synthetic_body);
  EXPECT_EQ(out[1].body, "filled");
  EXPECT_EQ(code_of([&] { synthesize_corpus(recs, std::vector<std::string>{}, 0); }), ErrorCode::EmptyPool);
}

TEST(BodyPool, PercentSeparated) {
  std::ifstream in(fixture("pool.txt"));
  const auto pool = read_body_pool(in);
  ASSERT_EQ(pool.size(), 3u);
  EXPECT_EQ(pool[1], "Second pooled body.");
}

TEST(LoadDataset, FixtureHandle) {
  testing::TempDir dir;
  Store store(dir.path());
  const auto loaded = load_dataset(store, fixture("three.mbox"), SourceFormat::mbox);
  EXPECT_EQ(loaded.handle().record_count, 3u);
}

TEST(LoadDataset, UnreadablePath) {
  testing::TempDir dir;
  Store store(dir.path());
  EXPECT_EQ(code_of([&] { load_dataset(store, dir.path() / "missing.mbox", SourceFormat::mbox); }),
            ErrorCode::UnreadableStream);
}

TEST(LoadDataset, TwiceGivesDistinctIds) {
  testing::TempDir dir;
  Store store(dir.path());
  const auto a = load_dataset(store, fixture("three.mbox"), SourceFormat::mbox);
  const auto b = load_dataset(store, fixture("three.mbox"), SourceFormat::mbox);
  EXPECT_NE(a.handle().dataset_id, b.handle().dataset_id);
}

TEST(LoadDataset, SynthesizesFromPool) {
  testing::TempDir dir;
  Store store(dir.path());
  std::istringstream in("from,to,subject\na@x.com,b@y.com,one\nb@y.com,a@x.com,two\n");
  LoadOptions opts;
  opts.body_pool = std::vector<std::string>{"pooled"};
  const auto loaded = load_dataset(store, in, SourceFormat::csv, opts);
  for (const auto& r : loaded.dataset->records()) {
    EXPECT_EQ(r.body, "pooled");
    EXPECT_TRUE(r.synthetic_body);
  }
}

TEST(Validate, RandomCorporaAreWellFormed) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    for (const auto& r : testing::random_corpus(rng, {})) EXPECT_EQ(validate(r), std::nullopt);
  }
}

}  // namespace
}  // namespace mailscope
