#include "mailscope/entities.hpp"

#include <algorithm>
#include <cmath>

#include "mailscope/error.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

const std::set<std::string, std::less<>>& entity_stopwords() {
  static const std::set<std::string, std::less<>> words = {
      "a",     "about", "all",   "am",   "an",    "and",   "are",  "as",   "at",   "be",   "been", "but",
      "by",    "can",   "do",    "for",  "from",  "had",   "has",  "have", "he",   "her",  "him",  "his",
      "how",   "if",    "in",    "into", "is",    "it",    "its",  "me",   "my",   "no",   "not",  "of",
      "on",    "or",    "our",   "she",  "so",    "than",  "that", "the",  "their", "them", "then", "there",
      "these", "they",  "this",  "to",   "up",    "us",    "was",  "we",   "were", "what", "when", "which",
      "who",   "will",  "with",  "would", "you",  "your"};
  return words;
}

std::vector<EntityScore> rank_entities(const ResultSet& results, const CorpusIndex& index, std::size_t k) {
  if (k == 0) fail(ErrorCode::InvalidArgument, "k must be at least 1");
  if (results.empty()) fail(ErrorCode::EmptyResults, "no documents match the current filters");

  struct Accumulator {
    std::uint64_t occurrences = 0;
    std::uint64_t df = 0;
    bool in_subject = false;
    bool in_body = false;
  };
  std::map<std::string_view, Accumulator> acc;
  for (const DocId d : results.doc_ids) {
    for (const auto& [term, counts] : index.doc_terms(d)) {
      auto& a = acc[term];
      a.occurrences += counts.total();
      ++a.df;
      a.in_subject |= counts.subject > 0;
      a.in_body |= counts.body > 0;
    }
  }

  const auto n = static_cast<double>(results.size());
  const auto& stop = entity_stopwords();
  std::vector<EntityScore> scored;
  for (const auto& [term, a] : acc) {
    if (a.df == results.size() || stop.contains(term)) continue;
    // sum_d f(t,d) * idf' = (sum_d f(t,d)) * idf' since idf' does not depend on d
    const double score = static_cast<double>(a.occurrences) * std::log(n / static_cast<double>(a.df));
    if (score <= 0.0) continue;
    scored.push_back(EntityScore{Term(term), score, a.in_subject, a.in_body});
  }
  const auto by_rank = [](const EntityScore& x, const EntityScore& y) {
    return x.score != y.score ? x.score > y.score : x.term < y.term;
  };
  if (scored.size() > k) {
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), by_rank);
    scored.resize(k);
  } else {
    std::sort(scored.begin(), scored.end(), by_rank);
  }
  return scored;
}

Term normalize_term(std::string_view raw) {
  auto tokens = tokenize(raw);
  if (tokens.size() != 1) fail(ErrorCode::InvalidArgument, "'" + std::string(raw) + "' is not a single term");
  return std::move(tokens.front());
}

bool TagStore::assign(std::string_view term, std::string_view tag) {
  const std::string_view label = text::trim(tag);
  if (label.empty()) fail(ErrorCode::EmptyLabel, "tag label is empty");
  return assignments_[normalize_term(term)].insert(text::sanitize_utf8(label)).second;
}

std::set<std::string> TagStore::lookup(std::string_view term) const {
  const auto it = assignments_.find(term);
  return it == assignments_.end() ? std::set<std::string>{} : it->second;
}

std::size_t TagStore::assignment_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, tags] : assignments_) n += tags.size();
  return n;
}

nlohmann::json TagStore::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [term, tags] : assignments_) j[term] = tags;
  return j;
}

TagStore TagStore::from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorCode::StorageFailure, "tag store must be a JSON object");
  TagStore store;
  try {
    for (const auto& [term, tags] : j.items()) {
      for (const auto& tag : tags) store.assign(term, tag.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::StorageFailure, std::string("malformed tag store: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorCode::StorageFailure, std::string("malformed tag store: ") + e.what());
  }
  return store;
}

std::vector<TagCount> tag_distribution(const TagStore& store) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& [_, tags] : store.assignments()) {
    for (const auto& t : tags) ++counts[t];
  }
  std::vector<TagCount> out;
  out.reserve(counts.size());
  for (auto& [tag, count] : counts) out.push_back(TagCount{tag, count});
  std::stable_sort(out.begin(), out.end(), [](const TagCount& a, const TagCount& b) { return a.count > b.count; });
  return out;
}

}  // namespace mailscope
