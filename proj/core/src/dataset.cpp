#include "mailscope/dataset.hpp"

#include <algorithm>

#include "mailscope/error.hpp"

namespace mailscope {

Dataset::Dataset(DatasetHandle handle, std::vector<EmailRecord> records, CorpusIndex index)
    : handle_(std::move(handle)), records_(std::move(records)), index_(std::move(index)) {
  std::sort(records_.begin(), records_.end(),
            [](const EmailRecord& a, const EmailRecord& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i - 1].doc_id == records_[i].doc_id) {
      fail(ErrorCode::DuplicateDocId, "duplicate document id " + records_[i].doc_id.str());
    }
  }
  if (index_.doc_count() != records_.size() ||
      !std::equal(index_.docs().begin(), index_.docs().end(), records_.begin(),
                  [](DocId d, const EmailRecord& r) { return d == r.doc_id; })) {
    fail(ErrorCode::StorageFailure, "index does not match the records of dataset " + handle_.dataset_id);
  }
  handle_.record_count = records_.size();

  for (const auto& r : records_) {
    const auto add = [&](const Address& a) {
      auto& list = by_address_[a.canonical()];
      if (list.empty() || list.back() != r.doc_id) list.push_back(r.doc_id);
    };
    add(r.sender);
    for (const auto& a : r.recipients) add(a);
    if (r.timestamp) by_time_.emplace_back(*r.timestamp, r.doc_id);
  }
  std::sort(by_time_.begin(), by_time_.end());
}

const EmailRecord& Dataset::record(DocId d) const {
  const auto it = std::lower_bound(records_.begin(), records_.end(), d,
                                   [](const EmailRecord& r, DocId id) { return r.doc_id < id; });
  if (it == records_.end() || it->doc_id != d) fail(ErrorCode::UnknownDoc, "document " + d.str() + " not in dataset");
  return *it;
}

std::span<const DocId> Dataset::docs_with(std::string_view canonical_address) const {
  const auto it = by_address_.find(canonical_address);
  if (it == by_address_.end()) return {};
  return it->second;
}

std::vector<DocId> Dataset::docs_between(Timestamp start, Timestamp end) const {
  std::vector<DocId> out;
  auto it = std::lower_bound(by_time_.begin(), by_time_.end(), start,
                             [](const std::pair<Timestamp, DocId>& e, Timestamp t) { return e.first < t; });
  for (; it != by_time_.end() && it->first <= end; ++it) out.push_back(it->second);
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<const Dataset> make_dataset(DatasetHandle handle, std::vector<EmailRecord> records) {
  CorpusIndex index = build_index(handle.dataset_id, records);
  return std::make_shared<const Dataset>(std::move(handle), std::move(records), std::move(index));
}

}  // namespace mailscope
