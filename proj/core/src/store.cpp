#include "mailscope/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mailscope/error.hpp"
#include "mailscope/payload.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void storage_failure(const std::string& what) {
  fail(ErrorCode::StorageFailure, what + ": " + std::strerror(errno));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::StorageFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const fs::path& path) {
  auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::StorageFailure, "malformed JSON in " + path.string());
  return j;
}

std::string numbered_id(std::string_view prefix, unsigned n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*s%04u", static_cast<int>(prefix.size()), prefix.data(), n);
  return buf;
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) storage_failure("cannot create " + tmp.string());
  std::size_t written = 0;
  while (written < content.size()) {
    const ssize_t n = ::write(fd, content.data() + written, content.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      storage_failure("cannot write " + tmp.string());
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    storage_failure("cannot sync " + tmp.string());
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) storage_failure("cannot rename onto " + path.string());
}

Store::Store(fs::path data_dir) : root_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(root_ / "datasets", ec);
  if (!ec) fs::create_directories(root_ / "sessions", ec);
  if (ec) fail(ErrorCode::StorageFailure, "cannot create data directory " + root_.string() + ": " + ec.message());
}

fs::path Store::dataset_dir(const std::string& id) const { return root_ / "datasets" / id; }

fs::path Store::session_file(const std::string& id, std::string_view suffix) const {
  return root_ / "sessions" / (id + std::string(suffix));
}

std::shared_ptr<const Dataset> Store::save_dataset(std::vector<EmailRecord> records, std::string label) {
  for (const auto& r : records) {
    if (auto problem = validate(r)) fail(ErrorCode::InvalidArgument, r.doc_id.str() + ": " + *problem);
  }
  std::string id;
  {
    const std::lock_guard lock(id_mutex_);
    for (unsigned n = 1;; ++n) {
      id = numbered_id("ds", n);
      std::error_code ec;
      if (fs::create_directory(dataset_dir(id), ec)) break;
      if (ec) fail(ErrorCode::StorageFailure, "cannot create dataset directory: " + ec.message());
    }
  }
  DatasetHandle handle{id, records.size(), system_now(), std::move(label)};
  auto dataset = make_dataset(handle, std::move(records));

  std::string lines;
  for (const auto& r : dataset->records()) {
    lines += payload::record(r).dump();
    lines += '\n';
  }
  const fs::path dir = dataset_dir(id);
  write_file_atomic(dir / "records.jsonl", lines);
  write_file_atomic(dir / "index.snapshot", index_snapshot(dataset->index()).dump());
  nlohmann::json h = payload::dataset_handle(dataset->handle());
  h["version"] = 1;
  // handle.json last: its presence marks the dataset complete
  write_file_atomic(dir / "handle.json", h.dump());
  return dataset;
}

std::vector<DatasetHandle> Store::list_datasets() const {
  std::vector<DatasetHandle> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root_ / "datasets", ec)) {
    const fs::path handle = entry.path() / "handle.json";
    if (!fs::exists(handle)) continue;
    out.push_back(payload::dataset_handle_from_json(read_json(handle)));
  }
  if (ec) fail(ErrorCode::StorageFailure, "cannot list datasets: " + ec.message());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.dataset_id < b.dataset_id; });
  return out;
}

std::shared_ptr<const Dataset> Store::open_dataset(const std::string& id) const {
  if (id.empty() || id.find('/') != std::string::npos || id.find("..") != std::string::npos) {
    fail(ErrorCode::UnknownDataset, "no dataset '" + id + "'");
  }
  const fs::path dir = dataset_dir(id);
  if (!fs::exists(dir / "handle.json")) fail(ErrorCode::UnknownDataset, "no dataset '" + id + "'");
  DatasetHandle handle = payload::dataset_handle_from_json(read_json(dir / "handle.json"));

  std::vector<EmailRecord> records;
  const std::string lines = read_file(dir / "records.jsonl");
  for (std::string_view line : text::split_lines(lines)) {
    if (text::trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::StorageFailure, "malformed record line in dataset " + id);
    records.push_back(payload::record_from_json(j));
  }
  CorpusIndex index = index_from_snapshot(read_json(dir / "index.snapshot"));
  if (index.dataset_id() != id) fail(ErrorCode::StorageFailure, "index snapshot of " + id + " names another dataset");
  return std::make_shared<const Dataset>(std::move(handle), std::move(records), std::move(index));
}

std::string Store::new_session_id() {
  const std::lock_guard lock(id_mutex_);
  for (unsigned n = 1;; ++n) {
    const std::string id = numbered_id("s", n);
    const fs::path path = session_file(id, ".json");
    // "x": exclusive create, fails if the id is taken
    if (std::FILE* f = std::fopen(path.c_str(), "wx")) {
      std::fclose(f);
      return id;
    }
    if (errno != EEXIST) storage_failure("cannot create " + path.string());
  }
}

void Store::save_session(const SessionState& state) {
  write_file_atomic(session_file(state.session_id, ".actions.jsonl"), state.action_log.to_jsonl());
  write_file_atomic(session_file(state.session_id, ".json"), session_state_json(state).dump());
}

SessionState Store::load_session(const std::string& id) const {
  const fs::path state = session_file(id, ".json");
  if (id.empty() || id.find('/') != std::string::npos || !fs::exists(state) || fs::file_size(state) == 0) {
    fail(ErrorCode::UnknownSession, "no session '" + id + "'");
  }
  const fs::path actions = session_file(id, ".actions.jsonl");
  ActionLog log;
  if (fs::exists(actions)) {
    try {
      log = ActionLog::from_jsonl(read_file(actions));
    } catch (const Error& e) {
      fail(ErrorCode::StorageFailure, std::string("action log of session ") + id + ": " + e.what());
    }
  }
  return session_state_from_json(read_json(state), std::move(log));
}

void Store::persist_tag_store(const TagStore& store) { write_file_atomic(root_ / "tags.json", store.to_json().dump()); }

TagStore Store::load_tag_store() const {
  const fs::path path = root_ / "tags.json";
  if (!fs::exists(path)) return {};
  return TagStore::from_json(read_json(path));
}

LoadedDataset load_dataset(Store& store, std::istream& in, SourceFormat format, const LoadOptions& options) {
  ParseResult parsed = parse_stream(in, format, options.schema_map);
  if (options.body_pool) {
    parsed.records = synthesize_corpus(std::move(parsed.records), *options.body_pool, options.synth_seed);
  }
  return LoadedDataset{store.save_dataset(std::move(parsed.records), options.label), parsed.skipped};
}

LoadedDataset load_dataset(Store& store, const fs::path& path, SourceFormat format, const LoadOptions& options) {
  ParseResult parsed = parse_path(path, format, options.schema_map);
  if (options.body_pool) {
    parsed.records = synthesize_corpus(std::move(parsed.records), *options.body_pool, options.synth_seed);
  }
  std::string label = options.label.empty() ? path.filename().string() : options.label;
  return LoadedDataset{store.save_dataset(std::move(parsed.records), std::move(label)), parsed.skipped};
}

}  // namespace mailscope
