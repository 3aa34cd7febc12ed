#include "mailscope/workspace.hpp"

#include "mailscope/error.hpp"
#include "mailscope/payload.hpp"

namespace mailscope {

Workspace::Workspace(WorkspaceConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)), store_(config_.data_dir) {
  tags_ = store_.load_tag_store();
}

nlohmann::json Workspace::ingest(const std::filesystem::path& path, SourceFormat format, const LoadOptions& options) {
  auto loaded = load_dataset(store_, path, format, options);
  {
    const std::lock_guard lock(datasets_mutex_);
    datasets_[loaded.dataset->id()] = loaded.dataset;
  }
  auto out = payload::dataset_handle(loaded.handle());
  out["skipped"] = loaded.skipped;
  return out;
}

nlohmann::json Workspace::ingest(std::istream& in, SourceFormat format, const LoadOptions& options) {
  auto loaded = load_dataset(store_, in, format, options);
  {
    const std::lock_guard lock(datasets_mutex_);
    datasets_[loaded.dataset->id()] = loaded.dataset;
  }
  auto out = payload::dataset_handle(loaded.handle());
  out["skipped"] = loaded.skipped;
  return out;
}

nlohmann::json Workspace::list_datasets() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& h : store_.list_datasets()) out.push_back(payload::dataset_handle(h));
  return out;
}

std::shared_ptr<const Dataset> Workspace::dataset(const std::string& dataset_id) {
  {
    const std::lock_guard lock(datasets_mutex_);
    if (const auto it = datasets_.find(dataset_id); it != datasets_.end()) return it->second;
  }
  auto loaded = store_.open_dataset(dataset_id);
  const std::lock_guard lock(datasets_mutex_);
  return datasets_.try_emplace(dataset_id, std::move(loaded)).first->second;
}

std::string Workspace::register_session(Session session, bool persist) {
  auto s = std::make_shared<Slot>();
  s->persist = persist;
  const std::string id = session.id();
  s->session.emplace(std::move(session));
  if (persist) save(*s);
  const std::lock_guard lock(sessions_mutex_);
  sessions_[id] = std::move(s);
  return id;
}

nlohmann::json Workspace::create_session(const std::string& dataset_id, bool persist) {
  auto ds = dataset(dataset_id);
  std::string id;
  if (persist) {
    id = store_.new_session_id();
  } else {
    const std::lock_guard lock(sessions_mutex_);
    id = "mem" + std::to_string(++ephemeral_counter_);
  }
  register_session(Session(id, std::move(ds), clock_), persist);
  return session(id);
}

std::shared_ptr<Workspace::Slot> Workspace::slot(const std::string& sid) {
  {
    const std::lock_guard lock(sessions_mutex_);
    if (const auto it = sessions_.find(sid); it != sessions_.end()) return it->second;
  }
  // not live: try the store (e.g. after a restart)
  SessionState state = store_.load_session(sid);
  auto restored = std::make_shared<Slot>();
  restored->session.emplace(Session::restore(state, dataset(state.dataset_id), clock_));
  const std::lock_guard lock(sessions_mutex_);
  return sessions_.try_emplace(sid, std::move(restored)).first->second;
}

void Workspace::save(const Slot& s) {
  if (s.persist) store_.save_session(s.session->state());
}

nlohmann::json Workspace::with_fingerprint(const Session& s, nlohmann::json body) const {
  body["fingerprint"] = s.results().fingerprint;
  return body;
}

nlohmann::json Workspace::session(const std::string& sid) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const Session& session = *s->session;
  nlohmann::json out = payload::result_summary(session.stack(), session.results());
  out["session_id"] = session.id();
  out["undo_depth"] = session.graph().deletion_stack().size();
  if (const auto& p = session.cluster_params()) {
    out["clustering"] = {{"k", p->k}, {"seed", p->seed}};
  } else {
    out["clustering"] = nullptr;
  }
  out["actions"] = session.log().size();
  return out;
}

nlohmann::json Workspace::add_filter(const std::string& sid, FilterField field, const nlohmann::json& value) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const Filter& f = s->session->add_filter(field, value);
  auto out = payload::result_summary(s->session->stack(), s->session->results());
  out["added"] = f.to_json();
  save(*s);
  return out;
}

nlohmann::json Workspace::remove_filter(const std::string& sid, const std::string& filter_id) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  s->session->remove_filter(filter_id);
  save(*s);
  return payload::result_summary(s->session->stack(), s->session->results());
}

nlohmann::json Workspace::results(const std::string& sid, std::size_t offset, std::optional<std::size_t> limit) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const Session& session = *s->session;
  return with_fingerprint(session, payload::results_page(session.results(), session.dataset(), offset,
                                                         limit.value_or(config_.page_size)));
}

nlohmann::json Workspace::doc_ids(const std::string& sid) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  nlohmann::json ids = nlohmann::json::array();
  for (const DocId d : s->session->results().doc_ids) ids.push_back(d.str());
  return with_fingerprint(*s->session, {{"doc_ids", std::move(ids)}});
}

nlohmann::json Workspace::correspondents(const std::string& sid) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const Session& session = *s->session;
  return with_fingerprint(
      session, {{"correspondents", payload::correspondents(correspondent_stats(session.results(), session.dataset()))}});
}

nlohmann::json Workspace::timeline(const std::string& sid, Granularity granularity) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const Session& session = *s->session;
  return with_fingerprint(session,
                          payload::timeline(timeline_bins(session.results(), session.dataset(), granularity), granularity));
}

nlohmann::json Workspace::entities(const std::string& sid, std::size_t k) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const Session& session = *s->session;
  const auto scores = rank_entities(session.results(), session.dataset().index(), k);
  const std::shared_lock tags_lock(tags_mutex_);
  return with_fingerprint(session, {{"entities", payload::entities(scores, tags_)}});
}

nlohmann::json Workspace::graph(const std::string& sid) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  return with_fingerprint(*s->session, payload::graph(s->session->graph()));
}

nlohmann::json Workspace::graph_remove(const std::string& sid, const nlohmann::json& request) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const auto str = [&](const char* key) {
    if (!request.is_object() || !request.contains(key) || !request[key].is_string()) {
      fail(ErrorCode::InvalidArgument, std::string("missing string field '") + key + "'");
    }
    return request[key].get<std::string>();
  };
  const std::string kind = str("kind");
  if (kind == "node") {
    s->session->remove_node(str("node"));
  } else if (kind == "edge") {
    s->session->remove_edge(str("a"), str("b"));
  } else {
    fail(ErrorCode::InvalidArgument, "kind must be 'node' or 'edge'");
  }
  save(*s);
  return with_fingerprint(*s->session, payload::graph(s->session->graph()));
}

nlohmann::json Workspace::graph_undo(const std::string& sid) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  s->session->undo_removal();
  save(*s);
  return with_fingerprint(*s->session, payload::graph(s->session->graph()));
}

std::string Workspace::export_graph(const std::string& sid, std::string_view format) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  if (format == "dot") return to_dot(s->session->graph());
  if (format == "graphml") return to_graphml(s->session->graph());
  fail(ErrorCode::InvalidArgument, "graph format must be dot or graphml");
}

nlohmann::json Workspace::clusterize(const std::string& sid, int k, std::uint64_t seed) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const auto n = s->session->results().size();
  if (n > config_.cluster_doc_cap) {
    fail(ErrorCode::ClusterCapExceeded, std::to_string(n) + " documents exceed the clustering cap of " +
                                            std::to_string(config_.cluster_doc_cap));
  }
  const Clustering& c =
      s->session->clusterize(k, seed, ClusterOptions{config_.restarts, config_.max_iterations});
  auto out = with_fingerprint(*s->session, payload::clustering(c));
  save(*s);
  return out;
}

nlohmann::json Workspace::cluster_members(const std::string& sid, int index) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  const auto& c = s->session->clustering();
  if (!c) fail(ErrorCode::InvalidArgument, "session has no clustering yet");
  return with_fingerprint(*s->session, payload::cluster_members(*c, index));
}

std::string Workspace::actions(const std::string& sid) {
  auto s = slot(sid);
  const std::lock_guard lock(s->mutex);
  return s->session->log().to_jsonl();
}

nlohmann::json Workspace::assign_tag(std::string_view term, std::string_view tag, const std::optional<std::string>& sid) {
  std::shared_ptr<Slot> s;
  std::unique_lock<std::mutex> session_lock;
  if (sid) {
    s = slot(*sid);
    session_lock = std::unique_lock(s->mutex);
  }
  const std::unique_lock tags_lock(tags_mutex_);
  TagStore next = tags_;
  bool changed = false;
  if (s) {
    changed = s->session->assign_tag(next, term, tag);
  } else {
    changed = next.assign(term, tag);
  }
  if (changed) store_.persist_tag_store(next);
  tags_ = std::move(next);
  if (s) save(*s);
  auto out = payload::tag_sets(normalize_term(term), tags_);
  out["changed"] = changed;
  return out;
}

nlohmann::json Workspace::lookup_tags(std::string_view term) const {
  const std::shared_lock lock(tags_mutex_);
  return payload::tag_sets(normalize_term(term), tags_);
}

nlohmann::json Workspace::tag_distribution() const {
  const std::shared_lock lock(tags_mutex_);
  return payload::tag_distribution(mailscope::tag_distribution(tags_));
}

std::string Workspace::replay(const std::string& dataset_id, std::string_view log_jsonl) {
  const ActionLog log = ActionLog::from_jsonl(log_jsonl);
  auto ds = dataset(dataset_id);
  TagStore scratch;
  {
    const std::shared_lock lock(tags_mutex_);
    scratch = tags_;
  }
  std::string id;
  {
    const std::lock_guard lock(sessions_mutex_);
    id = "mem" + std::to_string(++ephemeral_counter_);
  }
  return register_session(mailscope::replay(log, std::move(ds), scratch, id), false);
}

}  // namespace mailscope
