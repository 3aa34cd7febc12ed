#include "mailscope/textindex.hpp"

#include <algorithm>
#include <cmath>

#include "mailscope/error.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

std::string_view to_string(Field f) noexcept { return f == Field::subject ? "subject" : "body"; }

std::vector<Term> tokenize(std::string_view input) {
  std::vector<Term> out;
  std::string current;
  std::size_t length = 0;
  const auto flush = [&] {
    if (length >= 2) out.push_back(std::move(current));
    current.clear();
    length = 0;
  };
  for (char32_t cp : text::decode_utf8(input)) {
    if (text::is_alnum(cp)) {
      text::append_utf8(current, text::fold_case(cp));
      ++length;
    } else {
      flush();
    }
  }
  flush();
  return out;
}

bool CorpusIndex::contains(DocId d) const noexcept { return std::binary_search(docs_.begin(), docs_.end(), d); }

std::size_t CorpusIndex::position(DocId d) const {
  const auto it = std::lower_bound(docs_.begin(), docs_.end(), d);
  if (it == docs_.end() || *it != d) fail(ErrorCode::UnknownDoc, "document " + d.str() + " is not in the index");
  return static_cast<std::size_t>(it - docs_.begin());
}

std::span<const Posting> CorpusIndex::postings(std::string_view term) const {
  const auto it = postings_.find(term);
  if (it == postings_.end()) return {};
  return it->second;
}

std::size_t CorpusIndex::doc_freq(std::string_view term) const {
  const auto it = doc_freq_.find(term);
  return it == doc_freq_.end() ? 0 : it->second;
}

const TermCounts& CorpusIndex::doc_terms(DocId d) const { return forward_[position(d)]; }

const FieldCounts& CorpusIndex::doc_length(DocId d) const { return lengths_[position(d)]; }

FieldCounts CorpusIndex::term_count(std::string_view term, DocId d) const {
  const auto& terms = doc_terms(d);
  const auto it = terms.find(term);
  return it == terms.end() ? FieldCounts{} : it->second;
}

// Rebuilds doc_freq and the forward view from the postings.
void CorpusIndex::derive() {
  doc_freq_.clear();
  forward_.assign(docs_.size(), {});
  for (const auto& [term, list] : postings_) {
    std::uint32_t df = 0;
    DocId last{0};
    bool first = true;
    for (const auto& p : list) {
      if (first || p.doc != last) ++df;
      first = false;
      last = p.doc;
      auto& counts = forward_[position(p.doc)][term];
      (p.field == Field::subject ? counts.subject : counts.body) += p.tf;
    }
    doc_freq_.emplace(term, df);
  }
}

CorpusIndex build_index(std::string dataset_id, std::span<const EmailRecord> records) {
  if (records.empty()) fail(ErrorCode::EmptyCorpus, "cannot index an empty corpus");
  CorpusIndex index;
  index.dataset_id_ = std::move(dataset_id);
  index.docs_.reserve(records.size());
  for (const auto& r : records) index.docs_.push_back(r.doc_id);
  std::sort(index.docs_.begin(), index.docs_.end());
  if (const auto dup = std::adjacent_find(index.docs_.begin(), index.docs_.end()); dup != index.docs_.end()) {
    fail(ErrorCode::DuplicateDocId, "duplicate document id " + dup->str());
  }

  index.lengths_.assign(records.size(), {});
  for (const auto& r : records) {
    auto& length = index.lengths_[index.position(r.doc_id)];
    for (const Field field : {Field::subject, Field::body}) {
      std::map<Term, std::uint32_t, std::less<>> counts;
      for (auto& t : tokenize(field == Field::subject ? r.subject : r.body)) ++counts[std::move(t)];
      for (const auto& [term, tf] : counts) {
        index.postings_[term].push_back(Posting{r.doc_id, field, tf});
        (field == Field::subject ? length.subject : length.body) += tf;
      }
    }
  }
  for (auto& [term, list] : index.postings_) {
    std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) {
      return a.doc != b.doc ? a.doc < b.doc : a.field < b.field;
    });
  }
  index.derive();
  return index;
}

double tfidf(std::string_view term, DocId d, const CorpusIndex& index) {
  const std::uint32_t f = index.term_count(term, d).total();
  if (f == 0) return 0.0;
  const auto n = static_cast<double>(index.doc_count());
  const auto df = static_cast<double>(index.doc_freq(term));
  return static_cast<double>(f) * std::log(n / df);
}

SparseVector doc_vector(DocId d, const CorpusIndex& index) {
  SparseVector v;
  const auto& terms = index.doc_terms(d);
  v.reserve(terms.size());
  const auto n = static_cast<double>(index.doc_count());
  for (const auto& [term, counts] : terms) {
    const auto df = static_cast<double>(index.doc_freq(term));
    v.emplace_back(term, static_cast<double>(counts.total()) * std::log(n / df));
  }
  return v;
}

nlohmann::json index_snapshot(const CorpusIndex& index) {
  nlohmann::json docs = nlohmann::json::array();
  for (std::size_t i = 0; i < index.docs().size(); ++i) {
    const DocId d = index.docs()[i];
    const auto& len = index.doc_length(d);
    docs.push_back({d.ordinal(), len.subject, len.body});
  }
  nlohmann::json postings = nlohmann::json::object();
  for (const auto& [term, list] : index.postings()) {
    auto& out = postings[term];
    out = nlohmann::json::array();
    for (const auto& p : list) out.push_back({p.doc.ordinal(), p.field == Field::subject ? 0 : 1, p.tf});
  }
  return {{"version", kIndexSnapshotVersion},
          {"dataset_id", index.dataset_id()},
          {"docs", std::move(docs)},
          {"postings", std::move(postings)}};
}

CorpusIndex index_from_snapshot(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kIndexSnapshotVersion) {
      fail(ErrorCode::StorageFailure, "unsupported index snapshot version");
    }
    CorpusIndex index;
    index.dataset_id_ = j.at("dataset_id").get<std::string>();
    for (const auto& d : j.at("docs")) {
      index.docs_.push_back(DocId{d.at(0).get<std::uint32_t>()});
      index.lengths_.push_back(FieldCounts{d.at(1).get<std::uint32_t>(), d.at(2).get<std::uint32_t>()});
    }
    if (!std::is_sorted(index.docs_.begin(), index.docs_.end())) {
      fail(ErrorCode::StorageFailure, "index snapshot documents out of order");
    }
    for (const auto& [term, list] : j.at("postings").items()) {
      auto& out = index.postings_[term];
      for (const auto& p : list) {
        out.push_back(Posting{DocId{p.at(0).get<std::uint32_t>()},
                              p.at(1).get<int>() == 0 ? Field::subject : Field::body, p.at(2).get<std::uint32_t>()});
      }
    }
    index.derive();
    return index;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::StorageFailure, std::string("malformed index snapshot: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnknownDoc) fail(ErrorCode::StorageFailure, "index snapshot references unknown doc");
    throw;
  }
}

}  // namespace mailscope
