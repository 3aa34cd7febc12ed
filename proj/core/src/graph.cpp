#include "mailscope/graph.hpp"

#include <algorithm>
#include <sstream>

#include "mailscope/error.hpp"

namespace mailscope {

EdgeKey EdgeKey::of(std::string_view x, std::string_view y) {
  if (y < x) std::swap(x, y);
  return EdgeKey{std::string(x), std::string(y)};
}

void ContactGraph::remove_node(std::string_view node_view) {
  // copied: the view may point into a key erased below
  const std::string node(node_view);
  const auto it = nodes_.find(node);
  if (it == nodes_.end()) fail(ErrorCode::UnknownNode, "no node '" + node + "' in the graph");
  RemovalRecord rec;
  rec.kind = RemovalRecord::Kind::node;
  rec.node = *it;
  for (auto e = edges_.begin(); e != edges_.end();) {
    if (e->first.a == node || e->first.b == node) {
      rec.removed_edges.emplace_back(e->first, e->second);
      e = edges_.erase(e);
    } else {
      ++e;
    }
  }
  nodes_.erase(it);
  deletion_stack_.push_back(std::move(rec));
}

void ContactGraph::remove_edge(std::string_view a, std::string_view b) {
  EdgeKey key = EdgeKey::of(a, b);
  const auto it = edges_.find(key);
  if (it == edges_.end()) {
    fail(ErrorCode::UnknownEdge, "no edge {" + key.a + ", " + key.b + "} in the graph");
  }
  RemovalRecord rec;
  rec.kind = RemovalRecord::Kind::edge;
  rec.edge = key;
  rec.removed_edges.emplace_back(it->first, it->second);
  edges_.erase(it);
  deletion_stack_.push_back(std::move(rec));
}

void ContactGraph::undo_removal() {
  if (deletion_stack_.empty()) fail(ErrorCode::EmptyUndoStack, "nothing to restore");
  RemovalRecord rec = std::move(deletion_stack_.back());
  deletion_stack_.pop_back();
  if (rec.kind == RemovalRecord::Kind::node) nodes_.insert(rec.node);
  for (auto& [key, counts] : rec.removed_edges) edges_.emplace(std::move(key), counts);
}

ContactGraph build_graph(const ResultSet& results, const Dataset& dataset) {
  ContactGraph g;
  for (const DocId d : results.doc_ids) {
    const auto& r = dataset.record(d);
    const std::string& s = r.sender.canonical();
    g.nodes_.insert(s);
    for (const auto& to : r.recipients) {
      const std::string& t = to.canonical();
      g.nodes_.insert(t);
      auto& counts = g.edges_[EdgeKey::of(s, t)];
      if (s <= t) {
        ++counts.a_to_b;
      } else {
        ++counts.b_to_a;
      }
    }
  }
  return g;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string to_dot(const ContactGraph& graph) {
  std::ostringstream out;
  out << "graph contacts {\n";
  for (const auto& n : graph.nodes()) out << "  " << dot_quote(n) << ";\n";
  for (const auto& [key, counts] : graph.edges()) {
    out << "  " << dot_quote(key.a) << " -- " << dot_quote(key.b) << " [weight=" << counts.weight()
        << ", a_to_b=" << counts.a_to_b << ", b_to_a=" << counts.b_to_a << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_graphml(const ContactGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"int\"/>\n"
      << "  <key id=\"a_to_b\" for=\"edge\" attr.name=\"a_to_b\" attr.type=\"int\"/>\n"
      << "  <key id=\"b_to_a\" for=\"edge\" attr.name=\"b_to_a\" attr.type=\"int\"/>\n"
      << "  <graph id=\"contacts\" edgedefault=\"undirected\">\n";
  for (const auto& n : graph.nodes()) out << "    <node id=\"" << xml_escape(n) << "\"/>\n";
  for (const auto& [key, counts] : graph.edges()) {
    out << "    <edge source=\"" << xml_escape(key.a) << "\" target=\"" << xml_escape(key.b) << "\">"
        << "<data key=\"weight\">" << counts.weight() << "</data>"
        << "<data key=\"a_to_b\">" << counts.a_to_b << "</data>"
        << "<data key=\"b_to_a\">" << counts.b_to_a << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

}  // namespace mailscope
