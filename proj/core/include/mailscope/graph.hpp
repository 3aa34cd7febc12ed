#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mailscope/dataset.hpp"
#include "mailscope/query.hpp"

namespace mailscope {

// Unordered endpoint pair, stored with first <= second.
struct EdgeKey {
  std::string a;
  std::string b;

  static EdgeKey of(std::string_view x, std::string_view y);
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// Directed counts along an undirected edge; a self-edge counts in a_to_b.
struct EdgeCounts {
  std::uint32_t a_to_b = 0;
  std::uint32_t b_to_a = 0;

  std::uint32_t weight() const noexcept { return a_to_b + b_to_a; }
  friend bool operator==(const EdgeCounts&, const EdgeCounts&) = default;
};

struct RemovalRecord {
  enum class Kind { node, edge };

  Kind kind = Kind::node;
  std::string node;  // kind == node
  EdgeKey edge;      // kind == edge
  // Everything the removal took out, so undo can reinstate it exactly.
  std::vector<std::pair<EdgeKey, EdgeCounts>> removed_edges;

  friend bool operator==(const RemovalRecord&, const RemovalRecord&) = default;
};

// Correspondent graph of a result set with a LIFO deletion stack. Edits are
// view-local: they never touch records or the result set.
class ContactGraph {
 public:
  using EdgeMap = std::map<EdgeKey, EdgeCounts>;

  const std::set<std::string>& nodes() const noexcept { return nodes_; }
  const EdgeMap& edges() const noexcept { return edges_; }
  const std::vector<RemovalRecord>& deletion_stack() const noexcept { return deletion_stack_; }

  // Throws Error(UnknownNode).
  void remove_node(std::string_view node);
  // Throws Error(UnknownEdge).
  void remove_edge(std::string_view a, std::string_view b);
  // Pops and reinstates the most recent removal. Throws
  // Error(EmptyUndoStack).
  void undo_removal();

  // Graphs compare structurally, including the pending deletion stack.
  friend bool operator==(const ContactGraph&, const ContactGraph&) = default;

  friend ContactGraph build_graph(const ResultSet& results, const Dataset& dataset);

 private:
  std::set<std::string> nodes_;
  EdgeMap edges_;
  std::vector<RemovalRecord> deletion_stack_;
};

// One node per address in the matched emails; one (sender, recipient) pair
// per recipient, aggregated into undirected edges.
ContactGraph build_graph(const ResultSet& results, const Dataset& dataset);

std::string to_dot(const ContactGraph& graph);
std::string to_graphml(const ContactGraph& graph);

}  // namespace mailscope
