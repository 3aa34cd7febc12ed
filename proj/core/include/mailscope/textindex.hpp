#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mailscope/email_record.hpp"

namespace mailscope {

// A case-folded token of at least two code points with no whitespace.
using Term = std::string;

enum class Field : std::uint8_t { subject, body };

std::string_view to_string(Field f) noexcept;

// Case-folds, splits on every non-alphanumeric code point and drops tokens
// shorter than two code points. Order and duplicates are preserved.
std::vector<Term> tokenize(std::string_view text);

struct Posting {
  DocId doc;
  Field field;
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct FieldCounts {
  std::uint32_t subject = 0;
  std::uint32_t body = 0;

  std::uint32_t total() const noexcept { return subject + body; }
  std::uint32_t in(Field f) const noexcept { return f == Field::subject ? subject : body; }
  friend bool operator==(const FieldCounts&, const FieldCounts&) = default;
};

using TermCounts = std::map<Term, FieldCounts, std::less<>>;

// Immutable inverted index over one dataset. Subject and body are indexed
// as separate fields; a forward (doc -> term counts) view is kept alongside
// for vector construction.
class CorpusIndex {
 public:
  using PostingMap = std::map<Term, std::vector<Posting>, std::less<>>;

  CorpusIndex() = default;

  const std::string& dataset_id() const noexcept { return dataset_id_; }
  std::size_t doc_count() const noexcept { return docs_.size(); }
  // Ascending.
  std::span<const DocId> docs() const noexcept { return docs_; }
  bool contains(DocId d) const noexcept;

  const PostingMap& postings() const noexcept { return postings_; }
  // Empty span for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  std::size_t doc_freq(std::string_view term) const;

  // Throws Error(UnknownDoc).
  const TermCounts& doc_terms(DocId d) const;
  const FieldCounts& doc_length(DocId d) const;
  FieldCounts term_count(std::string_view term, DocId d) const;

  friend bool operator==(const CorpusIndex&, const CorpusIndex&) = default;

  friend CorpusIndex build_index(std::string dataset_id, std::span<const EmailRecord> records);
  friend CorpusIndex index_from_snapshot(const nlohmann::json& snapshot);

 private:
  std::size_t position(DocId d) const;
  void derive();

  std::string dataset_id_;
  std::vector<DocId> docs_;
  PostingMap postings_;
  std::map<Term, std::uint32_t, std::less<>> doc_freq_;
  std::vector<TermCounts> forward_;
  std::vector<FieldCounts> lengths_;
};

// Throws Error(EmptyCorpus) or Error(DuplicateDocId).
CorpusIndex build_index(std::string dataset_id, std::span<const EmailRecord> records);

// f(t,d) * ln(|D| / df(t)), with f summed over subject and body. Returns 0
// without touching the logarithm when t does not occur in d.
double tfidf(std::string_view term, DocId d, const CorpusIndex& index);

using SparseVector = std::vector<std::pair<Term, double>>;

// One entry per term occurring in d (zero-valued entries kept), sorted by
// term.
SparseVector doc_vector(DocId d, const CorpusIndex& index);

inline constexpr int kIndexSnapshotVersion = 1;
nlohmann::json index_snapshot(const CorpusIndex& index);
// Throws Error(StorageFailure) on malformed or unsupported snapshots.
CorpusIndex index_from_snapshot(const nlohmann::json& snapshot);

}  // namespace mailscope
