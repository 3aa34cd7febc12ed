#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mailscope/query.hpp"
#include "mailscope/textindex.hpp"

namespace mailscope {

struct EntityScore {
  Term term;
  double score = 0.0;
  bool in_subject = false;
  bool in_body = false;

  friend bool operator==(const EntityScore&, const EntityScore&) = default;
};

// Fixed English stoplist applied to entity rankings only; the index keeps
// every token so stopwords remain searchable.
const std::set<std::string, std::less<>>& entity_stopwords();

// Treats the matched docs as the collection D' and scores each term by
// sum over d in D' of f(t,d) * ln(|D'| / df'(t)). Stopwords and zero scores
// are dropped; the top k are returned by score descending, then term.
// Throws Error(EmptyResults) or Error(InvalidArgument) for k == 0.
std::vector<EntityScore> rank_entities(const ResultSet& results, const CorpusIndex& index, std::size_t k);

// Global term -> tag labels mapping. Append-only; set semantics per term.
class TagStore {
 public:
  using Assignments = std::map<Term, std::set<std::string>, std::less<>>;

  // Returns true when the store changed. Throws Error(EmptyLabel) for a
  // blank label and Error(InvalidArgument) for a term that is not a single
  // token.
  bool assign(std::string_view term, std::string_view tag);
  std::set<std::string> lookup(std::string_view term) const;
  const Assignments& assignments() const noexcept { return assignments_; }
  std::size_t assignment_count() const noexcept;

  nlohmann::json to_json() const;
  // Throws Error(StorageFailure) on malformed input.
  static TagStore from_json(const nlohmann::json& j);

  friend bool operator==(const TagStore&, const TagStore&) = default;

 private:
  Assignments assignments_;
};

// Canonical form of a term argument: exactly one token.
Term normalize_term(std::string_view raw);

struct TagCount {
  std::string tag;
  std::uint64_t count = 0;

  friend bool operator==(const TagCount&, const TagCount&) = default;
};

// One entry per label, counting the terms carrying it; count descending,
// then label ascending.
std::vector<TagCount> tag_distribution(const TagStore& store);

}  // namespace mailscope
