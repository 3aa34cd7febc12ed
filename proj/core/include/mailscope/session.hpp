#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mailscope/action_log.hpp"
#include "mailscope/cluster.hpp"
#include "mailscope/dataset.hpp"
#include "mailscope/entities.hpp"
#include "mailscope/graph.hpp"
#include "mailscope/query.hpp"

namespace mailscope {

using Clock = std::function<Timestamp()>;
Timestamp system_now();

struct GraphEdit {
  RemovalRecord::Kind kind = RemovalRecord::Kind::node;
  std::string node;
  std::string a;
  std::string b;

  friend bool operator==(const GraphEdit&, const GraphEdit&) = default;
};

struct ClusterParams {
  int k = 1;
  std::uint64_t seed = 0;
  ClusterOptions options;

  friend bool operator==(const ClusterParams& x, const ClusterParams& y) {
    return x.k == y.k && x.seed == y.seed && x.options.restarts == y.options.restarts &&
           x.options.max_iterations == y.options.max_iterations;
  }
};

struct TagAssignment {
  Term term;
  std::string tag;

  friend bool operator==(const TagAssignment&, const TagAssignment&) = default;
};

// Serializable snapshot of a session. The action log alone determines the
// rest given the dataset.
struct SessionState {
  std::string session_id;
  std::string dataset_id;
  std::vector<Filter> filters;
  std::uint64_t next_filter = 1;
  std::vector<GraphEdit> graph_edits;
  std::optional<ClusterParams> clustering;
  std::vector<TagAssignment> tag_assignments;
  ActionLog action_log;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

// Everything except the action log, which is stored as JSON lines.
nlohmann::json session_state_json(const SessionState& s);
// Throws Error(StorageFailure).
SessionState session_state_from_json(const nlohmann::json& j, ActionLog log);

// One analyst's investigation over one dataset: the query stack and the
// views derived from its result set. Every mutation is appended to the
// action log. Not thread-safe; callers serialize access per session.
//
// Changing the filter stack rebuilds the contact graph (dropping pending
// graph edits) and clears the clustering, since both are views of the
// previous result set.
class Session {
 public:
  // Starts a fresh session and logs load_dataset.
  Session(std::string session_id, std::shared_ptr<const Dataset> dataset, Clock clock = system_now);

  // Rebuilds a session from a snapshot without logging anything. Throws
  // Error(DatasetMismatch) or Error(StorageFailure).
  static Session restore(const SessionState& state, std::shared_ptr<const Dataset> dataset,
                         Clock clock = system_now);

  SessionState state() const;

  const std::string& id() const noexcept { return id_; }
  const Dataset& dataset() const noexcept { return *dataset_; }
  const std::shared_ptr<const Dataset>& dataset_ptr() const noexcept { return dataset_; }
  const QueryStack& stack() const noexcept { return stack_; }
  const ResultSet& results() const noexcept { return results_; }
  const ContactGraph& graph() const noexcept { return graph_; }
  const std::optional<ClusterParams>& cluster_params() const noexcept { return cluster_params_; }
  const std::optional<Clustering>& clustering() const noexcept { return clustering_; }
  const std::vector<TagAssignment>& tag_assignments() const noexcept { return tag_assignments_; }
  const ActionLog& log() const noexcept { return log_; }

  // Filter ids are "f1", "f2", ... in creation order.
  const Filter& add_filter(FilterField field, const nlohmann::json& value);
  void remove_filter(std::string_view filter_id);
  bool assign_tag(TagStore& store, std::string_view term, std::string_view tag);
  void remove_node(std::string_view node);
  void remove_edge(std::string_view a, std::string_view b);
  void undo_removal();
  const Clustering& clusterize(int k, std::uint64_t seed, const ClusterOptions& options = {});

  void set_clock(Clock clock) { clock_ = std::move(clock); }

 private:
  struct Unlogged {};
  Session(Unlogged, std::string session_id, std::shared_ptr<const Dataset> dataset, Clock clock);
  friend Session replay(const ActionLog&, std::shared_ptr<const Dataset>, TagStore&, std::string);

  void refresh();
  void record(ActionKind kind, nlohmann::json payload);

  std::string id_;
  std::shared_ptr<const Dataset> dataset_;
  Clock clock_;
  QueryStack stack_;
  std::uint64_t next_filter_ = 1;
  ResultSet results_;
  ContactGraph graph_;
  std::vector<GraphEdit> graph_edits_;
  std::optional<ClusterParams> cluster_params_;
  std::optional<Clustering> clustering_;
  std::vector<TagAssignment> tag_assignments_;
  ActionLog log_;
};

// Re-applies every logged action to a pristine session over dataset,
// keeping the logged timestamps. Tag assignments go into `tags`. Throws
// Error(MalformedLog) for structurally invalid entries and
// Error(ReplayDivergence) when an action cannot be applied.
Session replay(const ActionLog& log, std::shared_ptr<const Dataset> dataset, TagStore& tags, std::string session_id);

}  // namespace mailscope
