#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mailscope/address.hpp"
#include "mailscope/dataset.hpp"
#include "mailscope/textindex.hpp"

namespace mailscope {

enum class FilterField { subject, content, correspondent, date_range };

std::string_view to_string(FilterField f) noexcept;
std::optional<FilterField> parse_filter_field(std::string_view name);

struct DateRange {
  Timestamp start;
  Timestamp end;

  friend bool operator==(const DateRange&, const DateRange&) = default;
};

class Filter {
 public:
  using Value = std::variant<Term, Address, DateRange>;

  // Term filters tokenize raw_value and require exactly one token;
  // correspondent filters normalize it as an address. Throws
  // Error(InvalidFilter).
  static Filter term(std::string id, FilterField field, std::string_view raw_value);
  static Filter correspondent(std::string id, std::string_view raw_address);
  static Filter date_range(std::string id, Timestamp start, Timestamp end);
  // Dispatches on field. Date ranges take {"start": ISO, "end": ISO}.
  static Filter from_json(std::string id, FilterField field, const nlohmann::json& value);

  const std::string& id() const noexcept { return id_; }
  FilterField field() const noexcept { return field_; }
  const Value& value() const noexcept { return value_; }

  // "content:money", "correspondent:a@b.com", "date_range:<iso>/<iso>".
  // Two filters are duplicates iff their keys are equal.
  std::string key() const;
  nlohmann::json value_json() const;
  nlohmann::json to_json() const;

  friend bool operator==(const Filter&, const Filter&) = default;

 private:
  Filter(std::string id, FilterField field, Value value)
      : id_(std::move(id)), field_(field), value_(std::move(value)) {}

  std::string id_;
  FilterField field_ = FilterField::content;
  Value value_;
};

// Ordered (insertion order) list of conjunctive filters over one dataset.
class QueryStack {
 public:
  QueryStack() = default;
  explicit QueryStack(std::string dataset_id) : dataset_id_(std::move(dataset_id)) {}

  const std::string& dataset_id() const noexcept { return dataset_id_; }
  std::span<const Filter> filters() const noexcept { return filters_; }
  bool empty() const noexcept { return filters_.empty(); }
  const Filter* find(std::string_view filter_id) const;

  friend bool operator==(const QueryStack&, const QueryStack&) = default;

 private:
  friend QueryStack push_filter(QueryStack stack, Filter f);
  friend QueryStack remove_filter(QueryStack stack, std::string_view filter_id);

  std::string dataset_id_;
  std::vector<Filter> filters_;
};

// Throws Error(DuplicateFilter) when a filter with the same key, or
// Error(InvalidFilter) when one with the same id, is already present.
QueryStack push_filter(QueryStack stack, Filter f);
// Throws Error(UnknownFilter).
QueryStack remove_filter(QueryStack stack, std::string_view filter_id);

// Order-independent hash of the filter multiset, as 16 hex digits.
std::string stack_fingerprint(std::span<const Filter> filters);

struct ResultSet {
  std::vector<DocId> doc_ids;  // ascending
  std::string evaluated_against;
  std::string fingerprint;

  std::size_t size() const noexcept { return doc_ids.size(); }
  bool empty() const noexcept { return doc_ids.empty(); }
  bool contains(DocId d) const;
  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

// A doc matches iff it satisfies every filter. An empty stack matches all
// docs. Throws Error(DatasetMismatch).
ResultSet evaluate(const QueryStack& stack, const Dataset& dataset);

}  // namespace mailscope
