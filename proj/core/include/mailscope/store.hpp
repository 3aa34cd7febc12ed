#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mailscope/dataset.hpp"
#include "mailscope/entities.hpp"
#include "mailscope/ingest.hpp"
#include "mailscope/session.hpp"

namespace mailscope {

// Writes to a sibling temp file, fsyncs it and renames it over path, so a
// reader sees either the old or the new content. Throws
// Error(StorageFailure).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// On-disk layout under the data directory:
//   datasets/<id>/records.jsonl
//   datasets/<id>/index.snapshot
//   datasets/<id>/handle.json
//   tags.json
//   sessions/<id>.json
//   sessions/<id>.actions.jsonl
class Store {
 public:
  explicit Store(std::filesystem::path data_dir);

  const std::filesystem::path& root() const noexcept { return root_; }

  // Assigns a fresh dataset id and persists records plus index snapshot.
  std::shared_ptr<const Dataset> save_dataset(std::vector<EmailRecord> records, std::string label);
  std::vector<DatasetHandle> list_datasets() const;
  // Throws Error(UnknownDataset) or Error(StorageFailure).
  std::shared_ptr<const Dataset> open_dataset(const std::string& dataset_id) const;

  std::string new_session_id();
  void save_session(const SessionState& state);
  // Throws Error(UnknownSession) or Error(StorageFailure).
  SessionState load_session(const std::string& session_id) const;

  void persist_tag_store(const TagStore& store);
  // Empty store when nothing was persisted yet.
  TagStore load_tag_store() const;

 private:
  std::filesystem::path dataset_dir(const std::string& id) const;
  std::filesystem::path session_file(const std::string& id, std::string_view suffix) const;

  std::filesystem::path root_;
  std::mutex id_mutex_;
};

struct LoadOptions {
  SchemaMap schema_map;
  std::string label;
  // When set, empty bodies are filled from this pool using synth_seed.
  std::optional<std::vector<std::string>> body_pool;
  std::uint64_t synth_seed = 0;
};

struct LoadedDataset {
  std::shared_ptr<const Dataset> dataset;
  std::size_t skipped = 0;

  const DatasetHandle& handle() const { return dataset->handle(); }
};

// Parses path with the format's parser and persists the result under a
// fresh dataset id. Loading the same file twice yields two datasets.
LoadedDataset load_dataset(Store& store, const std::filesystem::path& path, SourceFormat format,
                           const LoadOptions& options = {});

// Same, for an already opened stream (uploads).
LoadedDataset load_dataset(Store& store, std::istream& in, SourceFormat format, const LoadOptions& options = {});

}  // namespace mailscope
