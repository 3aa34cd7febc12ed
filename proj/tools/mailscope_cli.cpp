// mailscope: headless driver for ingest, querying, reports, graph export,
// clustering, replay and the HTTP service.
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mailscope/service.hpp"
#include "mailscope/time.hpp"
#include "mailscope/workspace.hpp"

namespace {

using nlohmann::json;
using namespace mailscope;

constexpr int kUsage = 1;
constexpr int kData = 2;

struct Filters {
  std::vector<std::string> content;
  std::vector<std::string> subject;
  std::vector<std::string> correspondent;
  std::string from;
  std::string to;

  void attach(CLI::App* cmd) {
    cmd->add_option("--content", content, "Body contains word (repeatable)");
    cmd->add_option("--subject", subject, "Subject contains word (repeatable)");
    cmd->add_option("--correspondent", correspondent, "Sender or recipient address (repeatable)");
    cmd->add_option("--from", from, "Earliest timestamp, inclusive");
    cmd->add_option("--to", to, "Latest timestamp, inclusive; a bare date means end of that day");
  }

  // Applies the filters in a fixed order: content, subject, correspondent,
  // date range. Filter ids follow that order.
  void apply(Workspace& ws, const std::string& sid) const {
    for (const auto& w : content) ws.add_filter(sid, FilterField::content, w);
    for (const auto& w : subject) ws.add_filter(sid, FilterField::subject, w);
    for (const auto& a : correspondent) ws.add_filter(sid, FilterField::correspondent, a);
    if (!from.empty() || !to.empty()) ws.add_filter(sid, FilterField::date_range, date_range_value());
  }

  json date_range_value() const {
    std::string end = to.empty() ? "9999-12-31T23:59:59Z" : to;
    if (end.size() == 10) end += "T23:59:59Z";
    return {{"start", from.empty() ? "0001-01-01T00:00:00Z" : from}, {"end", end}};
  }
};

void print_json(const json& j) { std::cout << j.dump() << '\n'; }

std::string open_session(Workspace& ws, const std::string& dataset_id, const Filters& filters) {
  const std::string sid = ws.create_session(dataset_id, false)["session_id"];
  filters.apply(ws, sid);
  return sid;
}

void print_correspondents(const json& rows) {
  std::cout << std::left << std::setw(40) << "correspondent" << std::right << std::setw(8) << "sent" << std::setw(10)
            << "received" << std::setw(8) << "total" << '\n';
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(40) << r["address"].get<std::string>() << std::right << std::setw(8)
              << r["sent"].get<std::size_t>() << std::setw(10) << r["received"].get<std::size_t>() << std::setw(8)
              << r["total"].get<std::size_t>() << '\n';
  }
}

void print_timeline(const json& t) {
  std::cout << std::left << std::setw(12) << t["granularity"].get<std::string>() << std::right << std::setw(8) << "count"
            << '\n';
  for (const auto& b : t["bins"]) {
    std::cout << std::left << std::setw(12) << b["bucket"].get<std::string>() << std::right << std::setw(8)
              << b["count"].get<std::size_t>() << '\n';
  }
}

void print_entities(const json& rows) {
  std::cout << std::left << std::setw(24) << "entity" << std::right << std::setw(12) << "score" << "  tags\n";
  for (const auto& e : rows) {
    std::string tags;
    for (const auto& t : e["tags"]) tags += (tags.empty() ? "" : ",") + t.get<std::string>();
    std::cout << std::left << std::setw(24) << e["term"].get<std::string>() << std::right << std::setw(12)
              << std::fixed << std::setprecision(4) << e["score"].get<double>() << "  " << tags << '\n';
  }
}

int usage_or_data(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidFilter:
    case ErrorCode::InvalidK:
    case ErrorCode::UnknownFormat:
    case ErrorCode::EmptyLabel:
      return kUsage;
    default:
      return kData;
  }
}

HttpService* g_service = nullptr;

extern "C" void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mailscope: investigative email analytics"};
  app.require_subcommand(1);
  app.fallthrough();

  WorkspaceConfig config;
  std::string data_dir = "mailscope-data";
  app.add_option("--data-dir", data_dir, "Data directory")->envname("MAILSCOPE_DATA_DIR");
  app.add_option("--cluster-doc-cap", config.cluster_doc_cap, "Refuse to cluster more documents than this")
      ->envname("MAILSCOPE_CLUSTER_DOC_CAP");
  app.add_option("--restarts", config.restarts, "k-means restarts")->envname("MAILSCOPE_RESTARTS")
      ->check(CLI::PositiveNumber);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit JSON");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse a corpus into a new dataset");
  std::string in_path, in_format, pool_path, label;
  std::vector<std::string> schema_pairs;
  std::uint64_t synth_seed = 0;
  ingest->add_option("path", in_path, "Corpus file or directory")->required();
  ingest->add_option("--format", in_format, "mbox|eml|csv|jsonl")->required()
      ->check(CLI::IsMember({"mbox", "eml", "csv", "jsonl"}));
  ingest->add_option("--schema-map", schema_pairs, "field=column for tabular input (repeatable)");
  ingest->add_option("--synthesize-bodies", pool_path, "Fill empty bodies from this %%-separated pool");
  ingest->add_option("--seed", synth_seed, "Seed for body synthesis");
  ingest->add_option("--label", label, "Dataset label");

  // query
  auto* query = app.add_subcommand("query", "Evaluate a conjunctive filter stack");
  std::string dataset_id;
  Filters filters;
  std::size_t offset = 0;
  std::optional<std::size_t> limit;
  query->add_option("dataset_id", dataset_id)->required();
  filters.attach(query);
  query->add_option("--offset", offset, "First record of the --json page");
  query->add_option("--limit", limit, "Page size of the --json page");

  // report
  auto* report = app.add_subcommand("report", "Correspondent, timeline and entity tables");
  std::size_t top_k = 10;
  std::string granularity = "month";
  report->add_option("dataset_id", dataset_id)->required();
  filters.attach(report);
  report->add_option("--entities", top_k, "Number of entities")->check(CLI::PositiveNumber);
  report->add_option("--granularity", granularity)->check(CLI::IsMember({"day", "month", "year"}));

  // export-graph
  auto* export_graph = app.add_subcommand("export-graph", "Write the contact graph");
  std::string graph_format = "graphml", out_path;
  export_graph->add_option("dataset_id", dataset_id)->required();
  filters.attach(export_graph);
  export_graph->add_option("--format", graph_format)->check(CLI::IsMember({"dot", "graphml"}));
  export_graph->add_option("--out", out_path, "Output file; stdout when omitted");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Spherical k-means over the result set");
  int k = 0;
  std::uint64_t seed = 0;
  cluster->add_option("dataset_id", dataset_id)->required();
  filters.attach(cluster);
  cluster->add_option("-k", k, "Number of clusters")->required()->check(CLI::Range(1, 1 << 20));
  cluster->add_option("--seed", seed, "RNG seed");

  // replay
  auto* replay = app.add_subcommand("replay", "Re-apply an exported action log");
  std::string log_path;
  replay->add_option("dataset_id", dataset_id)->required();
  replay->add_option("--log", log_path, "actions.jsonl")->required()->check(CLI::ExistingFile);

  // datasets / tags
  auto* datasets = app.add_subcommand("datasets", "List ingested datasets");
  auto* tags = app.add_subcommand("tags", "Global entity tags");
  tags->require_subcommand(1);
  tags->fallthrough();
  std::string term, tag;
  auto* tag_assign = tags->add_subcommand("assign", "Attach a tag to a term");
  tag_assign->add_option("term", term)->required();
  tag_assign->add_option("tag", tag)->required();
  auto* tag_lookup = tags->add_subcommand("lookup", "Tags of one term");
  tag_lookup->add_option("term", term)->required();
  auto* tag_dist = tags->add_subcommand("distribution", "Terms per tag");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port)->envname("MAILSCOPE_PORT");
  serve->add_option("--host", host);
  serve->add_option("--data-dir", data_dir, "Data directory")->envname("MAILSCOPE_DATA_DIR");
  serve->add_option("--cluster-doc-cap", config.cluster_doc_cap)->envname("MAILSCOPE_CLUSTER_DOC_CAP");
  serve->add_option("--restarts", config.restarts)->envname("MAILSCOPE_RESTARTS")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    config.data_dir = data_dir;
    Workspace ws(config);

    if (*ingest) {
      LoadOptions opts;
      opts.label = label.empty() ? std::filesystem::path(in_path).filename().string() : label;
      for (const auto& pair : schema_pairs) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0) {
          std::cerr << "error: --schema-map expects field=column, got '" << pair << "'\n";
          return kUsage;
        }
        opts.schema_map[pair.substr(0, eq)] = pair.substr(eq + 1);
      }
      if (!pool_path.empty()) {
        std::ifstream pool(pool_path);
        if (!pool) fail(ErrorCode::UnreadableStream, "cannot open body pool '" + pool_path + "'");
        opts.body_pool = read_body_pool(pool);
        opts.synth_seed = synth_seed;
      }
      const json handle = ws.ingest(in_path, *parse_source_format(in_format), opts);
      if (as_json) {
        print_json(handle);
      } else {
        std::cout << handle["dataset_id"].get<std::string>() << '\n';
        if (handle["skipped"].get<std::size_t>() > 0) {
          std::cerr << "skipped " << handle["skipped"].get<std::size_t>() << " unparseable message(s)\n";
        }
      }
    } else if (*query) {
      const std::string sid = open_session(ws, dataset_id, filters);
      if (as_json) {
        print_json(ws.results(sid, offset, limit));
      } else {
        const json ids = ws.doc_ids(sid)["doc_ids"];
        std::cout << ids.size() << (ids.size() == 1 ? " match" : " matches");
        for (std::size_t i = 0; i < ids.size(); ++i) std::cout << (i == 0 ? ": " : " ") << ids[i].get<std::string>();
        std::cout << '\n';
      }
    } else if (*report) {
      const std::string sid = open_session(ws, dataset_id, filters);
      const json corr = ws.correspondents(sid);
      const json timeline = ws.timeline(sid, *parse_granularity(granularity));
      json ents;
      try {
        ents = ws.entities(sid, top_k);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyResults) throw;
        ents = {{"entities", json::array()}, {"fingerprint", corr["fingerprint"]}};
      }
      if (as_json) {
        print_json({{"correspondents", corr}, {"timeline", timeline}, {"entities", ents}});
      } else {
        std::cout << ws.doc_ids(sid)["doc_ids"].size() << " matching emails\n\n";
        print_correspondents(corr["correspondents"]);
        std::cout << '\n';
        print_timeline(timeline);
        std::cout << '\n';
        print_entities(ents["entities"]);
      }
    } else if (*export_graph) {
      const std::string sid = open_session(ws, dataset_id, filters);
      const std::string text = ws.export_graph(sid, graph_format);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(out_path, text);
      }
    } else if (*cluster) {
      const std::string sid = open_session(ws, dataset_id, filters);
      const json c = ws.clusterize(sid, k, seed);
      json members = json::array();
      for (int i = 0; i < k; ++i) members.push_back(ws.cluster_members(sid, i));
      if (as_json) {
        print_json({{"clustering", c}, {"members", members}});
      } else {
        std::cout << "k=" << k << " seed=" << seed << " objective=" << std::setprecision(10) << c["objective"].get<double>()
                  << " iterations=" << c["iterations_run"].get<int>() << '\n';
        for (const auto& m : members) {
          const auto& info = c["clusters"][m["cluster"].get<std::size_t>()];
          std::cout << "cluster " << m["cluster"].get<int>() << " head="
                    << (info["head"].is_null() ? std::string("-") : info["head"].get<std::string>()) << " members:";
          for (const auto& d : m["members"]) std::cout << ' ' << d.get<std::string>();
          std::cout << '\n';
        }
      }
    } else if (*replay) {
      std::ifstream in(log_path, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      const std::string sid = ws.replay(dataset_id, buf.str());
      json summary = ws.session(sid);
      summary.erase("session_id");
      summary["graph"] = ws.graph(sid);
      if (as_json) {
        print_json(summary);
      } else {
        std::cout << "replayed " << summary["actions"].get<std::size_t>() << " actions\n"
                  << "fingerprint " << summary["fingerprint"].get<std::string>() << '\n'
                  << summary["count"].get<std::size_t>() << " matching emails, " << summary["filters"].size()
                  << " filter(s)\n"
                  << summary["graph"]["nodes"].size() << " graph nodes, " << summary["graph"]["edges"].size()
                  << " edges, undo depth " << summary["undo_depth"].get<std::size_t>() << '\n';
        if (!summary["clustering"].is_null()) {
          std::cout << "clustered with k=" << summary["clustering"]["k"].get<int>() << '\n';
        }
      }
    } else if (*datasets) {
      const json list = ws.list_datasets();
      if (as_json) {
        print_json(list);
      } else {
        for (const auto& h : list) {
          std::cout << h["dataset_id"].get<std::string>() << '\t' << h["record_count"].get<std::size_t>() << '\t'
                    << h["ingested_at"].get<std::string>() << '\t' << h["label"].get<std::string>() << '\n';
        }
      }
    } else if (*tags) {
      json out;
      if (*tag_assign) out = ws.assign_tag(term, tag, std::nullopt);
      if (*tag_lookup) out = ws.lookup_tags(term);
      if (*tag_dist) out = ws.tag_distribution();
      if (as_json || *tag_dist) {
        print_json(out);
      } else {
        std::cout << out["term"].get<std::string>() << ':';
        for (const auto& t : out["tags"]) std::cout << ' ' << t.get<std::string>();
        std::cout << '\n';
      }
    } else if (*serve) {
      HttpService service(ws);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << host << ':' << port << " (data dir " << data_dir << ")\n";
      if (!service.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
        return kData;
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return usage_or_data(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return 0;
}
