#include "mailscope/service.hpp"

#include <charconv>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace mailscope {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnreadableStream:
    case ErrorCode::MissingColumn:
    case ErrorCode::InvalidAddress:
    case ErrorCode::UnknownFormat:
    case ErrorCode::InvalidFilter:
    case ErrorCode::MalformedLog:
    case ErrorCode::EmptyLabel:
    case ErrorCode::InvalidArgument:
      return 400;
    case ErrorCode::UnknownDoc:
    case ErrorCode::UnknownFilter:
    case ErrorCode::UnknownSession:
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownEdge:
    case ErrorCode::UnknownDataset:
    case ErrorCode::IndexOutOfRange:
      return 404;
    case ErrorCode::DuplicateFilter:
      return 409;
    case ErrorCode::EmptyCorpus:
    case ErrorCode::EmptyPool:
    case ErrorCode::DuplicateDocId:
    case ErrorCode::DatasetMismatch:
    case ErrorCode::ReplayDivergence:
    case ErrorCode::EmptyResults:
    case ErrorCode::EmptyUndoStack:
    case ErrorCode::InvalidK:
    case ErrorCode::ClusterCapExceeded:
      return 422;
    case ErrorCode::StorageFailure:
      return 500;
  }
  return 500;
}

ApiError to_api_error(const Error& e) {
  return ApiError{http_status(e.code()), std::string(to_string(e.code())), e.what()};
}

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const ApiError& e) {
  send(res, json{{"status", e.status}, {"code", e.code}, {"message", e.message}}, e.status);
}

json body_json(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

std::optional<std::size_t> size_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string v = req.get_param_value(name);
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    fail(ErrorCode::InvalidArgument, std::string(name) + " must be a non-negative integer");
  }
  return out;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  return j[key];
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) fail(ErrorCode::InvalidArgument, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

SchemaMap schema_from(const std::string& raw) {
  SchemaMap out;
  if (raw.empty()) return out;
  const json j = json::parse(raw, nullptr, false);
  if (!j.is_object()) fail(ErrorCode::InvalidArgument, "schema_map must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) fail(ErrorCode::InvalidArgument, "schema_map values must be strings");
    out[k] = v.get<std::string>();
  }
  return out;
}

// Form field from a multipart upload, falling back to the query string.
std::string form_value(const httplib::Request& req, const char* key) {
  if (req.has_file(key)) return req.get_file_value(key).content;
  if (req.has_param(key)) return req.get_param_value(key);
  return {};
}

template <class T>
T required(std::optional<T> v, std::string_view what, const std::string& raw) {
  if (!v) fail(ErrorCode::InvalidArgument, "unknown " + std::string(what) + " '" + raw + "'");
  return *v;
}

}  // namespace

HttpService::HttpService(Workspace& workspace, std::string cors_origin)
    : ws_(workspace), cors_origin_(std::move(cors_origin)), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpService::~HttpService() = default;

bool HttpService::listen(const std::string& host, int port) { return server_->listen(host, port); }
int HttpService::bind_to_any_port(const std::string& host) { return server_->bind_to_any_port(host); }
bool HttpService::listen_after_bind() { return server_->listen_after_bind(); }
void HttpService::wait_until_ready() const { server_->wait_until_ready(); }
void HttpService::stop() { server_->stop(); }

void HttpService::routes() {
  auto& s = *server_;
  using Req = const httplib::Request&;
  using Res = httplib::Response&;

  // Wraps a handler so module errors become ApiError bodies.
  auto guarded = [](auto fn) {
    return [fn](Req req, Res res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, to_api_error(e));
      } catch (const json::exception& e) {
        send_error(res, ApiError{400, "InvalidArgument", e.what()});
      } catch (const std::exception& e) {
        send_error(res, ApiError{500, "StorageFailure", e.what()});
      }
    };
  };

  s.set_default_headers({{"Access-Control-Allow-Origin", cors_origin_},
                         {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(.*)", [](Req, Res res) { res.status = 204; });
  s.set_error_handler([](Req, Res res) {
    if (res.status == 404 && res.body.empty()) {
      send_error(res, ApiError{404, "NotFound", "no such route"});
    }
  });

  s.Post("/datasets", guarded([this](Req req, Res res) {
    const std::string format = form_value(req, "format");
    if (format.empty()) fail(ErrorCode::InvalidArgument, "missing 'format'");
    LoadOptions opts;
    opts.schema_map = schema_from(form_value(req, "schema_map"));
    opts.label = form_value(req, "label");
    std::istringstream in(req.has_file("file") ? req.get_file_value("file").content : req.body);
    if (opts.label.empty() && req.has_file("file")) opts.label = req.get_file_value("file").filename;
    send(res, ws_.ingest(in, required(parse_source_format(format), "format", format), opts), 201);
  }));
  s.Get("/datasets", guarded([this](Req, Res res) { send(res, ws_.list_datasets()); }));

  s.Post("/sessions", guarded([this](Req req, Res res) {
    send(res, ws_.create_session(string_field(body_json(req), "dataset_id")), 201);
  }));
  s.Post("/sessions/replay", guarded([this](Req req, Res res) {
    const json body = body_json(req);
    const std::string sid = ws_.replay(string_field(body, "dataset_id"), string_field(body, "log"));
    send(res, ws_.session(sid), 201);
  }));
  s.Get("/sessions/:id", guarded([this](Req req, Res res) { send(res, ws_.session(req.path_params.at("id"))); }));

  s.Post("/sessions/:id/filters", guarded([this](Req req, Res res) {
    const json body = body_json(req);
    const std::string name = string_field(body, "field");
    const FilterField f = required(parse_filter_field(name), "filter field", name);
    send(res, ws_.add_filter(req.path_params.at("id"), f, field(body, "value")));
  }));
  s.Delete("/sessions/:id/filters/:fid", guarded([this](Req req, Res res) {
    send(res, ws_.remove_filter(req.path_params.at("id"), req.path_params.at("fid")));
  }));

  s.Get("/sessions/:id/results", guarded([this](Req req, Res res) {
    send(res, ws_.results(req.path_params.at("id"), size_param(req, "offset").value_or(0), size_param(req, "limit")));
  }));
  s.Get("/sessions/:id/correspondents",
        guarded([this](Req req, Res res) { send(res, ws_.correspondents(req.path_params.at("id"))); }));
  s.Get("/sessions/:id/timeline", guarded([this](Req req, Res res) {
    const std::string g = req.has_param("granularity") ? req.get_param_value("granularity") : "day";
    send(res, ws_.timeline(req.path_params.at("id"), required(parse_granularity(g), "granularity", g)));
  }));
  s.Get("/sessions/:id/entities", guarded([this](Req req, Res res) {
    send(res, ws_.entities(req.path_params.at("id"), size_param(req, "k").value_or(10)));
  }));

  s.Get("/sessions/:id/graph", guarded([this](Req req, Res res) { send(res, ws_.graph(req.path_params.at("id"))); }));
  s.Post("/sessions/:id/graph/remove", guarded([this](Req req, Res res) {
    send(res, ws_.graph_remove(req.path_params.at("id"), body_json(req)));
  }));
  s.Post("/sessions/:id/graph/undo",
         guarded([this](Req req, Res res) { send(res, ws_.graph_undo(req.path_params.at("id"))); }));
  s.Get("/sessions/:id/graph/export", guarded([this](Req req, Res res) {
    const std::string fmt = req.has_param("format") ? req.get_param_value("format") : "graphml";
    res.set_content(ws_.export_graph(req.path_params.at("id"), fmt),
                    fmt == "dot" ? "text/vnd.graphviz" : "application/xml");
  }));

  s.Post("/sessions/:id/cluster", guarded([this](Req req, Res res) {
    const json body = body_json(req);
    const json& k = field(body, "k");
    if (!k.is_number_integer()) fail(ErrorCode::InvalidArgument, "k must be an integer");
    std::uint64_t seed = 0;
    if (body.contains("seed")) {
      if (!body["seed"].is_number_unsigned()) fail(ErrorCode::InvalidArgument, "seed must be a non-negative integer");
      seed = body["seed"].get<std::uint64_t>();
    }
    send(res, ws_.clusterize(req.path_params.at("id"), k.get<int>(), seed));
  }));
  s.Get("/sessions/:id/cluster/:i/members", guarded([this](Req req, Res res) {
    const std::string& raw = req.path_params.at("i");
    int i = 0;
    const auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), i);
    if (ec != std::errc{} || p != raw.data() + raw.size()) fail(ErrorCode::InvalidArgument, "cluster index must be an integer");
    send(res, ws_.cluster_members(req.path_params.at("id"), i));
  }));
  s.Get("/sessions/:id/actions", guarded([this](Req req, Res res) {
    res.set_content(ws_.actions(req.path_params.at("id")), "application/x-ndjson");
  }));

  s.Post("/tags", guarded([this](Req req, Res res) {
    const json body = body_json(req);
    std::optional<std::string> sid;
    if (body.contains("session_id") && !body["session_id"].is_null()) sid = string_field(body, "session_id");
    send(res, ws_.assign_tag(string_field(body, "term"), string_field(body, "tag"), sid));
  }));
  s.Get("/tags/distribution", guarded([this](Req, Res res) { send(res, ws_.tag_distribution()); }));
  s.Get("/tags/:term", guarded([this](Req req, Res res) { send(res, ws_.lookup_tags(req.path_params.at("term"))); }));
}

}  // namespace mailscope
