#include "mailscope/payload.hpp"

#include "mailscope/error.hpp"

namespace mailscope::payload {

namespace {

nlohmann::json address(const Address& a) {
  return {{"address", a.canonical()},
          {"display_name", a.display_name() ? nlohmann::json(*a.display_name()) : nlohmann::json(nullptr)}};
}

Address address_from(const nlohmann::json& j) {
  std::optional<std::string> name;
  if (j.contains("display_name") && j["display_name"].is_string()) name = j["display_name"].get<std::string>();
  return Address::from_parts(j.at("address").get<std::string>(), std::move(name));
}

nlohmann::json doc_list(std::span<const DocId> docs) {
  nlohmann::json out = nlohmann::json::array();
  for (const DocId d : docs) out.push_back(d.str());
  return out;
}

}  // namespace

nlohmann::json record(const EmailRecord& r) {
  nlohmann::json recipients = nlohmann::json::array();
  for (const auto& a : r.recipients) recipients.push_back(address(a));
  return {{"doc_id", r.doc_id.str()},
          {"sender", address(r.sender)},
          {"recipients", std::move(recipients)},
          {"subject", r.subject},
          {"body", r.body},
          {"timestamp", r.timestamp ? nlohmann::json(format_iso8601(*r.timestamp)) : nlohmann::json(nullptr)},
          {"source_format", to_string(r.source_format)},
          {"synthetic_body", r.synthetic_body}};
}

EmailRecord record_from_json(const nlohmann::json& j) {
  try {
    EmailRecord r;
    const auto id = DocId::parse(j.at("doc_id").get<std::string>());
    const auto fmt = parse_source_format(j.at("source_format").get<std::string>());
    if (!id || !fmt) fail(ErrorCode::StorageFailure, "bad doc_id or source_format in stored record");
    r.doc_id = *id;
    r.source_format = *fmt;
    r.sender = address_from(j.at("sender"));
    for (const auto& a : j.at("recipients")) r.recipients.push_back(address_from(a));
    r.subject = j.at("subject").get<std::string>();
    r.body = j.at("body").get<std::string>();
    if (!j.at("timestamp").is_null()) {
      r.timestamp = parse_iso8601(j["timestamp"].get<std::string>());
      if (!r.timestamp) fail(ErrorCode::StorageFailure, "bad timestamp in stored record");
    }
    r.synthetic_body = j.at("synthetic_body").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::StorageFailure, std::string("malformed stored record: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::StorageFailure) throw;
    fail(ErrorCode::StorageFailure, std::string("malformed stored record: ") + e.what());
  }
}

nlohmann::json dataset_handle(const DatasetHandle& h) {
  return {{"dataset_id", h.dataset_id},
          {"record_count", h.record_count},
          {"ingested_at", format_iso8601(h.ingested_at)},
          {"label", h.label}};
}

DatasetHandle dataset_handle_from_json(const nlohmann::json& j) {
  try {
    DatasetHandle h;
    h.dataset_id = j.at("dataset_id").get<std::string>();
    h.record_count = j.at("record_count").get<std::size_t>();
    const auto ts = parse_iso8601(j.at("ingested_at").get<std::string>());
    if (!ts) fail(ErrorCode::StorageFailure, "bad ingested_at in dataset handle");
    h.ingested_at = *ts;
    h.label = j.at("label").get<std::string>();
    return h;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::StorageFailure, std::string("malformed dataset handle: ") + e.what());
  }
}

nlohmann::json result_summary(const QueryStack& stack, const ResultSet& results) {
  nlohmann::json filters = nlohmann::json::array();
  for (const auto& f : stack.filters()) filters.push_back(f.to_json());
  return {{"dataset_id", results.evaluated_against},
          {"fingerprint", results.fingerprint},
          {"count", results.size()},
          {"filters", std::move(filters)}};
}

nlohmann::json results_page(const ResultSet& results, const Dataset& dataset, std::size_t offset, std::size_t limit) {
  nlohmann::json records = nlohmann::json::array();
  for (std::size_t i = offset; i < results.size() && i < offset + limit; ++i) {
    records.push_back(record(dataset.record(results.doc_ids[i])));
  }
  return {{"offset", offset}, {"limit", limit}, {"total", results.size()}, {"records", std::move(records)}};
}

nlohmann::json correspondents(const std::vector<CorrespondentStat>& stats) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : stats) {
    out.push_back({{"address", s.address}, {"sent", s.sent}, {"received", s.received}, {"total", s.total()}});
  }
  return out;
}

nlohmann::json timeline(const std::vector<TimeBin>& bins, Granularity g) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : bins) out.push_back({{"bucket", b.bucket}, {"count", b.count}});
  return {{"granularity", to_string(g)}, {"bins", std::move(out)}};
}

nlohmann::json entities(const std::vector<EntityScore>& scores, const TagStore& tags) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : scores) {
    nlohmann::json fields = nlohmann::json::array();
    if (e.in_subject) fields.push_back("subject");
    if (e.in_body) fields.push_back("body");
    out.push_back({{"term", e.term}, {"score", e.score}, {"origin_fields", std::move(fields)}, {"tags", tags.lookup(e.term)}});
  }
  return out;
}

nlohmann::json tag_sets(const Term& term, const TagStore& tags) { return {{"term", term}, {"tags", tags.lookup(term)}}; }

nlohmann::json tag_distribution(const std::vector<TagCount>& counts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : counts) out.push_back({{"tag", c.tag}, {"count", c.count}});
  return out;
}

nlohmann::json graph(const ContactGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [key, counts] : g.edges()) {
    edges.push_back(
        {{"a", key.a}, {"b", key.b}, {"weight", counts.weight()}, {"a_to_b", counts.a_to_b}, {"b_to_a", counts.b_to_a}});
  }
  return {{"nodes", g.nodes()}, {"edges", std::move(edges)}, {"undo_depth", g.deletion_stack().size()}};
}

nlohmann::json clustering(const Clustering& c) {
  nlohmann::json clusters = nlohmann::json::array();
  std::vector<std::size_t> sizes(static_cast<std::size_t>(c.k), 0);
  for (const auto& [_, idx] : c.assignments) ++sizes[static_cast<std::size_t>(idx)];
  for (int i = 0; i < c.k; ++i) {
    const auto& head = c.heads[static_cast<std::size_t>(i)];
    clusters.push_back({{"index", i},
                        {"head", head ? nlohmann::json(head->str()) : nlohmann::json(nullptr)},
                        {"size", sizes[static_cast<std::size_t>(i)]}});
  }
  return {{"k", c.k},
          {"seed", c.seed},
          {"objective", c.objective},
          {"iterations_run", c.iterations_run},
          {"converged", c.converged},
          {"heads", doc_list(cluster_heads(c))},
          {"clusters", std::move(clusters)}};
}

nlohmann::json cluster_members(const Clustering& c, int index) {
  // evaluated first: a throw inside the initializer list would leak
  nlohmann::json list = doc_list(members(c, index));
  return {{"cluster", index}, {"members", std::move(list)}};
}

}  // namespace mailscope::payload
