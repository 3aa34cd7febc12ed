#include <gtest/gtest.h>

#include "mailscope/error.hpp"
#include "mailscope/graph.hpp"
#include "support.hpp"

namespace mailscope {
namespace {

using testing::make_record;

ContactGraph graph_of(std::vector<EmailRecord> recs) {
  const auto ds = testing::dataset_of(std::move(recs));
  return build_graph(evaluate(QueryStack(ds->id()), *ds), *ds);
}

ContactGraph triangle() {
  return graph_of({make_record(1, "a@x.com", {"b@x.com", "c@x.com"}, "", "x"),
                   make_record(2, "b@x.com", {"c@x.com"}, "", "x")});
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::StorageFailure;
}

TEST(BuildGraph, Empty) {
  const auto ds = testing::dataset_of({make_record(1, "a@x.com", {"b@x.com"}, "", "x")});
  auto rs = evaluate(QueryStack(ds->id()), *ds);
  rs.doc_ids.clear();
  const auto g = build_graph(rs, *ds);
  EXPECT_TRUE(g.nodes().empty());
  EXPECT_TRUE(g.edges().empty());
}

TEST(BuildGraph, SingleEmail) {
  const auto g = graph_of({make_record(1, "a@x.com", {"b@x.com"}, "", "x")});
  EXPECT_EQ(g.nodes(), (std::set<std::string>{"a@x.com", "b@x.com"}));
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges().at(EdgeKey::of("b@x.com", "a@x.com")), (EdgeCounts{1, 0}));
}

TEST(BuildGraph, DirectedCounts) {
  const auto g = graph_of({make_record(1, "a@x.com", {"b@x.com"}, "", "x"),
                           make_record(2, "a@x.com", {"b@x.com"}, "", "x"),
                           make_record(3, "b@x.com", {"a@x.com"}, "", "x")});
  const auto& e = g.edges().at(EdgeKey::of("a@x.com", "b@x.com"));
  EXPECT_EQ(e.weight(), 3u);
  EXPECT_EQ(e, (EdgeCounts{2, 1}));
}

TEST(BuildGraph, SelfEdge) {
  const auto g = graph_of({make_record(1, "a@x.com", {"a@x.com"}, "", "note to self")});
  EXPECT_EQ(g.edges().at(EdgeKey::of("a@x.com", "a@x.com")), (EdgeCounts{1, 0}));
}

TEST(BuildGraph, WeightConservation) {
  std::mt19937_64 rng(41);
  const auto recs = testing::random_corpus(rng, {.docs = 80});
  std::uint64_t pairs = 0, weight = 0;
  for (const auto& r : recs) pairs += r.recipients.size();
  const auto g = graph_of(recs);
  for (const auto& [k, c] : g.edges()) weight += c.weight();
  EXPECT_EQ(weight, pairs);
}

TEST(RemoveNode, Triangle) {
  auto g = triangle();
  g.remove_node("b@x.com");
  EXPECT_EQ(g.nodes().size(), 2u);
  EXPECT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.deletion_stack().size(), 1u);
}

TEST(RemoveNode, Isolated) {
  auto g = triangle();
  g.remove_edge("a@x.com", "b@x.com");
  g.remove_edge("b@x.com", "c@x.com");
  const auto edges = g.edges();
  g.remove_node("b@x.com");
  EXPECT_EQ(g.edges(), edges);
}

TEST(RemoveNode, NameViewIntoGraph) {
  auto g = triangle();
  const std::string_view name = g.edges().begin()->first.a;
  const std::string copy(name);
  g.remove_node(name);
  EXPECT_EQ(g.nodes().count(copy), 0u);
  EXPECT_EQ(g.edges().size(), 1u);
}

TEST(RemoveNode, Absent) {
  auto g = triangle();
  EXPECT_EQ(code_of([&] { g.remove_node("z@x.com"); }), ErrorCode::UnknownNode);
}

TEST(RemoveEdge, KeepsEndpoints) {
  auto g = graph_of({make_record(1, "a@x.com", {"b@x.com"}, "", "x")});
  g.remove_edge("a@x.com", "b@x.com");
  EXPECT_EQ(g.nodes().size(), 2u);
  EXPECT_TRUE(g.edges().empty());
  EXPECT_EQ(code_of([&] { g.remove_edge("a@x.com", "b@x.com"); }), ErrorCode::UnknownEdge);
}

TEST(Undo, InvertsEachRemoval) {
  const auto original = graph_of({make_record(1, "a@x.com", {"b@x.com"}, "", "x"),
                                  make_record(2, "b@x.com", {"a@x.com", "c@x.com"}, "", "x")});
  auto g = original;
  g.remove_edge("b@x.com", "a@x.com");
  g.undo_removal();
  EXPECT_EQ(g, original);
  g.remove_node("b@x.com");
  g.undo_removal();
  EXPECT_EQ(g, original);
}

TEST(Undo, LifoOrder) {
  const auto original = triangle();
  auto g = original;
  g.remove_node("a@x.com");
  const auto after_first = g;
  g.remove_edge("b@x.com", "c@x.com");
  g.undo_removal();
  EXPECT_EQ(g, after_first);
  g.undo_removal();
  EXPECT_EQ(g, original);
}

TEST(Undo, EmptyStack) {
  auto g = triangle();
  EXPECT_EQ(code_of([&] { g.undo_removal(); }), ErrorCode::EmptyUndoStack);
}

TEST(Export, DotAndGraphml) {
  const auto g = graph_of({make_record(1, "a@x.com", {"b@x.com"}, "", "x")});
  const auto dot = to_dot(g);
  EXPECT_NE(dot.find("\"a@x.com\" -- \"b@x.com\" [weight=1, a_to_b=1, b_to_a=0]"), std::string::npos);
  const auto xml = to_graphml(g);
  EXPECT_NE(xml.find("<graphml"), std::string::npos);
  EXPECT_NE(xml.find("source=\"a@x.com\""), std::string::npos);
}

}  // namespace
}  // namespace mailscope
