#include "mailscope/session.hpp"

#include "mailscope/error.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

Timestamp system_now() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

namespace {

nlohmann::json edit_json(const GraphEdit& e) {
  if (e.kind == RemovalRecord::Kind::node) return {{"kind", "node"}, {"node", e.node}};
  return {{"kind", "edge"}, {"a", e.a}, {"b", e.b}};
}

nlohmann::json cluster_json(const ClusterParams& p) {
  return {{"k", p.k},
          {"seed", p.seed},
          {"restarts", p.options.restarts},
          {"max_iterations", p.options.max_iterations}};
}

ClusterParams cluster_params_from(const nlohmann::json& j) {
  ClusterParams p;
  p.k = j.at("k").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.options.restarts = j.value("restarts", ClusterOptions{}.restarts);
  p.options.max_iterations = j.value("max_iterations", ClusterOptions{}.max_iterations);
  return p;
}

}  // namespace

nlohmann::json session_state_json(const SessionState& s) {
  nlohmann::json filters = nlohmann::json::array();
  for (const auto& f : s.filters) filters.push_back(f.to_json());
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : s.graph_edits) edits.push_back(edit_json(e));
  nlohmann::json tags = nlohmann::json::array();
  for (const auto& t : s.tag_assignments) tags.push_back({{"term", t.term}, {"tag", t.tag}});
  return {{"version", 1},
          {"session_id", s.session_id},
          {"dataset_id", s.dataset_id},
          {"filters", std::move(filters)},
          {"next_filter", s.next_filter},
          {"graph_edits", std::move(edits)},
          {"clustering", s.clustering ? cluster_json(*s.clustering) : nlohmann::json(nullptr)},
          {"tag_assignments", std::move(tags)}};
}

SessionState session_state_from_json(const nlohmann::json& j, ActionLog log) {
  try {
    SessionState s;
    s.session_id = j.at("session_id").get<std::string>();
    s.dataset_id = j.at("dataset_id").get<std::string>();
    s.next_filter = j.at("next_filter").get<std::uint64_t>();
    for (const auto& f : j.at("filters")) {
      const auto field = parse_filter_field(f.at("field").get<std::string>());
      if (!field) fail(ErrorCode::StorageFailure, "unknown filter field in session state");
      s.filters.push_back(Filter::from_json(f.at("filter_id").get<std::string>(), *field, f.at("value")));
    }
    for (const auto& e : j.at("graph_edits")) {
      GraphEdit edit;
      if (e.at("kind").get<std::string>() == "node") {
        edit.kind = RemovalRecord::Kind::node;
        edit.node = e.at("node").get<std::string>();
      } else {
        edit.kind = RemovalRecord::Kind::edge;
        edit.a = e.at("a").get<std::string>();
        edit.b = e.at("b").get<std::string>();
      }
      s.graph_edits.push_back(std::move(edit));
    }
    if (!j.at("clustering").is_null()) s.clustering = cluster_params_from(j.at("clustering"));
    for (const auto& t : j.at("tag_assignments")) {
      s.tag_assignments.push_back(TagAssignment{t.at("term").get<std::string>(), t.at("tag").get<std::string>()});
    }
    s.action_log = std::move(log);
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::StorageFailure, std::string("malformed session state: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::StorageFailure) throw;
    fail(ErrorCode::StorageFailure, std::string("malformed session state: ") + e.what());
  }
}

Session::Session(Unlogged, std::string session_id, std::shared_ptr<const Dataset> dataset, Clock clock)
    : id_(std::move(session_id)), dataset_(std::move(dataset)), clock_(std::move(clock)), stack_(dataset_->id()) {
  refresh();
}

Session::Session(std::string session_id, std::shared_ptr<const Dataset> dataset, Clock clock)
    : Session(Unlogged{}, std::move(session_id), std::move(dataset), std::move(clock)) {
  record(ActionKind::load_dataset, {{"dataset_id", dataset_->id()}});
}

Session Session::restore(const SessionState& state, std::shared_ptr<const Dataset> dataset, Clock clock) {
  if (state.dataset_id != dataset->id()) {
    fail(ErrorCode::DatasetMismatch, "session " + state.session_id + " belongs to dataset " + state.dataset_id);
  }
  Session s(Unlogged{}, state.session_id, std::move(dataset), std::move(clock));
  try {
    for (const auto& f : state.filters) s.stack_ = push_filter(std::move(s.stack_), f);
    s.next_filter_ = state.next_filter;
    s.results_ = evaluate(s.stack_, *s.dataset_);
    s.graph_ = build_graph(s.results_, *s.dataset_);
    for (const auto& e : state.graph_edits) {
      if (e.kind == RemovalRecord::Kind::node) {
        s.graph_.remove_node(e.node);
      } else {
        s.graph_.remove_edge(e.a, e.b);
      }
    }
    s.graph_edits_ = state.graph_edits;
    if (state.clustering) {
      const auto& p = *state.clustering;
      s.clustering_ = mailscope::clusterize(s.results_.doc_ids, s.dataset_->index(), p.k, p.seed, p.options);
      s.cluster_params_ = p;
    }
  } catch (const Error& e) {
    fail(ErrorCode::StorageFailure, "session " + state.session_id + " cannot be restored: " + e.what());
  }
  s.tag_assignments_ = state.tag_assignments;
  s.log_ = state.action_log;
  return s;
}

SessionState Session::state() const {
  SessionState s;
  s.session_id = id_;
  s.dataset_id = dataset_->id();
  s.filters.assign(stack_.filters().begin(), stack_.filters().end());
  s.next_filter = next_filter_;
  s.graph_edits = graph_edits_;
  s.clustering = cluster_params_;
  s.tag_assignments = tag_assignments_;
  s.action_log = log_;
  return s;
}

void Session::refresh() {
  results_ = evaluate(stack_, *dataset_);
  graph_ = build_graph(results_, *dataset_);
  graph_edits_.clear();
  cluster_params_.reset();
  clustering_.reset();
}

void Session::record(ActionKind kind, nlohmann::json payload) { log_.append(kind, std::move(payload), clock_()); }

const Filter& Session::add_filter(FilterField field, const nlohmann::json& value) {
  Filter f = Filter::from_json("f" + std::to_string(next_filter_), field, value);
  stack_ = push_filter(stack_, std::move(f));
  ++next_filter_;
  refresh();
  const Filter& added = stack_.filters().back();
  record(ActionKind::add_filter, added.to_json());
  return added;
}

void Session::remove_filter(std::string_view filter_id) {
  // the view may point into the stack being replaced
  const std::string id(filter_id);
  stack_ = mailscope::remove_filter(stack_, id);
  refresh();
  record(ActionKind::remove_filter, {{"filter_id", id}});
}

bool Session::assign_tag(TagStore& store, std::string_view term, std::string_view tag) {
  const Term t = normalize_term(term);
  const bool changed = store.assign(t, tag);
  const std::string label = text::sanitize_utf8(text::trim(tag));
  tag_assignments_.push_back(TagAssignment{t, label});
  record(ActionKind::assign_tag, {{"term", t}, {"tag", label}});
  return changed;
}

void Session::remove_node(std::string_view node_view) {
  const std::string node(node_view);
  graph_.remove_node(node);
  graph_edits_.push_back(GraphEdit{RemovalRecord::Kind::node, node, {}, {}});
  record(ActionKind::remove_node, {{"node", node}});
}

void Session::remove_edge(std::string_view a, std::string_view b) {
  const EdgeKey key = EdgeKey::of(a, b);
  graph_.remove_edge(key.a, key.b);
  graph_edits_.push_back(GraphEdit{RemovalRecord::Kind::edge, {}, key.a, key.b});
  record(ActionKind::remove_edge, {{"a", key.a}, {"b", key.b}});
}

void Session::undo_removal() {
  graph_.undo_removal();
  graph_edits_.pop_back();
  record(ActionKind::undo_removal, nlohmann::json::object());
}

const Clustering& Session::clusterize(int k, std::uint64_t seed, const ClusterOptions& options) {
  clustering_ = mailscope::clusterize(results_.doc_ids, dataset_->index(), k, seed, options);
  cluster_params_ = ClusterParams{k, seed, options};
  record(ActionKind::clusterize, cluster_json(*cluster_params_));
  return *clustering_;
}

Session replay(const ActionLog& log, std::shared_ptr<const Dataset> dataset, TagStore& tags, std::string session_id) {
  Timestamp current{};
  Session s(Session::Unlogged{}, std::move(session_id), std::move(dataset), [&current] { return current; });
  for (const auto& e : log.entries()) {
    current = e.ts;
    const auto where = " (seq " + std::to_string(e.seq) + ")";
    if (e.seq == 1 && e.kind != ActionKind::load_dataset) {
      fail(ErrorCode::MalformedLog, "log must start with load_dataset" + where);
    }
    try {
      const auto& p = e.payload;
      switch (e.kind) {
        case ActionKind::load_dataset:
          if (e.seq != 1) fail(ErrorCode::MalformedLog, "load_dataset may only appear first" + where);
          s.record(ActionKind::load_dataset, {{"dataset_id", s.dataset_->id()}});
          break;
        case ActionKind::add_filter: {
          const auto field = parse_filter_field(p.at("field").get<std::string>());
          if (!field) fail(ErrorCode::MalformedLog, "unknown filter field" + where);
          const auto expected_id = p.at("filter_id").get<std::string>();
          const Filter& f = s.add_filter(*field, p.at("value"));
          if (f.id() != expected_id) {
            fail(ErrorCode::ReplayDivergence, "filter created as " + f.id() + ", log says " + expected_id + where);
          }
          break;
        }
        case ActionKind::remove_filter: s.remove_filter(p.at("filter_id").get<std::string>()); break;
        case ActionKind::assign_tag:
          s.assign_tag(tags, p.at("term").get<std::string>(), p.at("tag").get<std::string>());
          break;
        case ActionKind::remove_node: s.remove_node(p.at("node").get<std::string>()); break;
        case ActionKind::remove_edge:
          s.remove_edge(p.at("a").get<std::string>(), p.at("b").get<std::string>());
          break;
        case ActionKind::undo_removal: s.undo_removal(); break;
        case ActionKind::clusterize: {
          const ClusterParams cp = cluster_params_from(p);
          s.clusterize(cp.k, cp.seed, cp.options);
          break;
        }
      }
    } catch (const nlohmann::json::exception& ex) {
      fail(ErrorCode::MalformedLog, std::string(ex.what()) + where);
    } catch (const Error& ex) {
      if (ex.code() == ErrorCode::MalformedLog || ex.code() == ErrorCode::ReplayDivergence) throw;
      fail(ErrorCode::ReplayDivergence, std::string(to_string(ex.code())) + ": " + ex.what() + where);
    }
  }
  s.set_clock(system_now);
  return s;
}

}  // namespace mailscope
