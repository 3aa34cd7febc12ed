#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mailscope/analytics.hpp"
#include "mailscope/session.hpp"
#include "mailscope/store.hpp"

namespace mailscope {

struct WorkspaceConfig {
  std::filesystem::path data_dir = "mailscope-data";
  // clusterize refuses result sets larger than this
  std::size_t cluster_doc_cap = 5000;
  int restarts = 10;
  int max_iterations = 100;
  std::size_t page_size = 50;
};

// Application core shared by the HTTP service and the CLI: owns the store,
// the dataset cache, live sessions and the global tag store, and renders
// every panel as JSON. Requests on different sessions run concurrently;
// requests on one session are serialized.
class Workspace {
 public:
  explicit Workspace(WorkspaceConfig config, Clock clock = system_now);

  const WorkspaceConfig& config() const noexcept { return config_; }
  Store& store() noexcept { return store_; }

  nlohmann::json ingest(const std::filesystem::path& path, SourceFormat format, const LoadOptions& options);
  nlohmann::json ingest(std::istream& in, SourceFormat format, const LoadOptions& options);
  nlohmann::json list_datasets() const;
  std::shared_ptr<const Dataset> dataset(const std::string& dataset_id);

  // persist = false keeps the session in memory only (headless CLI runs).
  nlohmann::json create_session(const std::string& dataset_id, bool persist = true);
  nlohmann::json session(const std::string& sid);

  nlohmann::json add_filter(const std::string& sid, FilterField field, const nlohmann::json& value);
  nlohmann::json remove_filter(const std::string& sid, const std::string& filter_id);
  nlohmann::json results(const std::string& sid, std::size_t offset, std::optional<std::size_t> limit);
  nlohmann::json doc_ids(const std::string& sid);
  nlohmann::json correspondents(const std::string& sid);
  nlohmann::json timeline(const std::string& sid, Granularity granularity);
  nlohmann::json entities(const std::string& sid, std::size_t k);
  nlohmann::json graph(const std::string& sid);
  // request: {"kind": "node", "node": addr} or {"kind": "edge", "a": .., "b": ..}
  nlohmann::json graph_remove(const std::string& sid, const nlohmann::json& request);
  nlohmann::json graph_undo(const std::string& sid);
  std::string export_graph(const std::string& sid, std::string_view format);
  nlohmann::json clusterize(const std::string& sid, int k, std::uint64_t seed);
  nlohmann::json cluster_members(const std::string& sid, int index);
  std::string actions(const std::string& sid);

  // Tags are global; when sid is given the assignment is logged there.
  nlohmann::json assign_tag(std::string_view term, std::string_view tag, const std::optional<std::string>& sid);
  nlohmann::json lookup_tags(std::string_view term) const;
  nlohmann::json tag_distribution() const;

  // Replays an exported action log against dataset_id into a new
  // in-memory session and returns its id. Replayed tag assignments go to a
  // scratch copy of the tag store, never the persisted one.
  std::string replay(const std::string& dataset_id, std::string_view log_jsonl);

 private:
  struct Slot {
    std::mutex mutex;
    std::optional<Session> session;
    bool persist = true;
  };

  std::shared_ptr<Slot> slot(const std::string& sid);
  std::string register_session(Session session, bool persist);
  void save(const Slot& s);
  nlohmann::json with_fingerprint(const Session& s, nlohmann::json body) const;

  WorkspaceConfig config_;
  Clock clock_;
  Store store_;

  mutable std::mutex datasets_mutex_;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets_;

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t ephemeral_counter_ = 0;

  mutable std::shared_mutex tags_mutex_;
  TagStore tags_;
};

}  // namespace mailscope
