#pragma once

#include <memory>
#include <string>

#include "mailscope/error.hpp"
#include "mailscope/workspace.hpp"

namespace httplib {
class Server;
}

namespace mailscope {

struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
};

int http_status(ErrorCode code) noexcept;
ApiError to_api_error(const Error& e);

// JSON over HTTP/1.1 in front of a Workspace. Routes:
//   POST   /datasets                       multipart "file" + "format"
//   GET    /datasets
//   POST   /sessions                       {dataset_id}
//   GET    /sessions/:id
//   POST   /sessions/:id/filters           {field, value}
//   DELETE /sessions/:id/filters/:fid
//   GET    /sessions/:id/results           ?offset&limit
//   GET    /sessions/:id/correspondents
//   GET    /sessions/:id/timeline          ?granularity=day|month|year
//   GET    /sessions/:id/entities          ?k=N
//   GET    /sessions/:id/graph
//   POST   /sessions/:id/graph/remove      {kind, node | a, b}
//   POST   /sessions/:id/graph/undo
//   GET    /sessions/:id/graph/export      ?format=dot|graphml
//   POST   /sessions/:id/cluster           {k, seed?}
//   GET    /sessions/:id/cluster/:i/members
//   GET    /sessions/:id/actions           JSON lines
//   POST   /sessions/replay                {dataset_id, log}
//   POST   /tags                           {term, tag, session_id?}
//   GET    /tags/:term
//   GET    /tags/distribution
class HttpService {
 public:
  explicit HttpService(Workspace& workspace, std::string cors_origin = "*");
  ~HttpService();
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Returns the bound port, or -1.
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  void routes();

  Workspace& ws_;
  std::string cors_origin_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace mailscope
