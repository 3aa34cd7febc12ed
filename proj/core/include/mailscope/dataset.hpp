#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mailscope/email_record.hpp"
#include "mailscope/textindex.hpp"
#include "mailscope/time.hpp"

namespace mailscope {

struct DatasetHandle {
  std::string dataset_id;
  std::size_t record_count = 0;
  Timestamp ingested_at{};
  std::string label;

  friend bool operator==(const DatasetHandle&, const DatasetHandle&) = default;
};

// An ingested, immutable dataset: records sorted by doc id, the text index
// and the metadata lookups (correspondent and time) that filters need.
class Dataset {
 public:
  // Records are re-sorted by doc id; the index must cover exactly the same
  // doc ids. Throws Error(DuplicateDocId) / Error(StorageFailure).
  Dataset(DatasetHandle handle, std::vector<EmailRecord> records, CorpusIndex index);

  const DatasetHandle& handle() const noexcept { return handle_; }
  const std::string& id() const noexcept { return handle_.dataset_id; }
  std::span<const EmailRecord> records() const noexcept { return records_; }
  const CorpusIndex& index() const noexcept { return index_; }

  // Throws Error(UnknownDoc).
  const EmailRecord& record(DocId d) const;

  // Ascending doc ids where the address is sender or a recipient.
  std::span<const DocId> docs_with(std::string_view canonical_address) const;
  // Ascending doc ids whose timestamp lies in [start, end].
  std::vector<DocId> docs_between(Timestamp start, Timestamp end) const;

 private:
  DatasetHandle handle_;
  std::vector<EmailRecord> records_;
  CorpusIndex index_;
  std::map<std::string, std::vector<DocId>, std::less<>> by_address_;
  std::vector<std::pair<Timestamp, DocId>> by_time_;
};

// Builds the index and wraps everything in a shareable immutable dataset.
std::shared_ptr<const Dataset> make_dataset(DatasetHandle handle, std::vector<EmailRecord> records);

}  // namespace mailscope
