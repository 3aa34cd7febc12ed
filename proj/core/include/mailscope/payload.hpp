#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "mailscope/analytics.hpp"
#include "mailscope/cluster.hpp"
#include "mailscope/dataset.hpp"
#include "mailscope/entities.hpp"
#include "mailscope/graph.hpp"
#include "mailscope/query.hpp"

// JSON mirrors of the domain types. Both the HTTP service and the CLI emit
// exactly these shapes, so their output for the same request is identical.
namespace mailscope::payload {

nlohmann::json record(const EmailRecord& r);
// Throws Error(StorageFailure).
EmailRecord record_from_json(const nlohmann::json& j);

nlohmann::json dataset_handle(const DatasetHandle& h);
DatasetHandle dataset_handle_from_json(const nlohmann::json& j);

nlohmann::json result_summary(const QueryStack& stack, const ResultSet& results);
nlohmann::json results_page(const ResultSet& results, const Dataset& dataset, std::size_t offset, std::size_t limit);
nlohmann::json correspondents(const std::vector<CorrespondentStat>& stats);
nlohmann::json timeline(const std::vector<TimeBin>& bins, Granularity g);
nlohmann::json entities(const std::vector<EntityScore>& scores, const TagStore& tags);
nlohmann::json tag_sets(const Term& term, const TagStore& tags);
nlohmann::json tag_distribution(const std::vector<TagCount>& counts);
nlohmann::json graph(const ContactGraph& g);
nlohmann::json clustering(const Clustering& c);
nlohmann::json cluster_members(const Clustering& c, int index);

}  // namespace mailscope::payload
