#include "mailscope/query.hpp"

#include <algorithm>
#include <cstdio>
#include <iterator>

#include "mailscope/error.hpp"

namespace mailscope {

std::string_view to_string(FilterField f) noexcept {
  switch (f) {
    case FilterField::subject: return "subject";
    case FilterField::content: return "content";
    case FilterField::correspondent: return "correspondent";
    case FilterField::date_range: return "date_range";
  }
  return "content";
}

std::optional<FilterField> parse_filter_field(std::string_view name) {
  if (name == "subject") return FilterField::subject;
  if (name == "content") return FilterField::content;
  if (name == "correspondent") return FilterField::correspondent;
  if (name == "date_range") return FilterField::date_range;
  return std::nullopt;
}

Filter Filter::term(std::string id, FilterField field, std::string_view raw_value) {
  if (field != FilterField::subject && field != FilterField::content) {
    fail(ErrorCode::InvalidFilter, "term filters apply to subject or content only");
  }
  auto tokens = tokenize(raw_value);
  if (tokens.size() != 1) {
    fail(ErrorCode::InvalidFilter, "'" + std::string(raw_value) + "' is not a single search term");
  }
  return Filter(std::move(id), field, std::move(tokens.front()));
}

Filter Filter::correspondent(std::string id, std::string_view raw_address) {
  try {
    return Filter(std::move(id), FilterField::correspondent, normalize_address(raw_address));
  } catch (const Error& e) {
    fail(ErrorCode::InvalidFilter, e.what());
  }
}

Filter Filter::date_range(std::string id, Timestamp start, Timestamp end) {
  if (end < start) fail(ErrorCode::InvalidFilter, "date range start is after its end");
  return Filter(std::move(id), FilterField::date_range, DateRange{start, end});
}

Filter Filter::from_json(std::string id, FilterField field, const nlohmann::json& value) {
  if (field == FilterField::date_range) {
    const auto bound = [&](const char* key) {
      if (!value.is_object() || !value.contains(key) || !value[key].is_string()) {
        fail(ErrorCode::InvalidFilter, std::string("date_range needs a '") + key + "' timestamp");
      }
      auto ts = parse_timestamp(value[key].get<std::string>());
      if (!ts) fail(ErrorCode::InvalidFilter, "unparseable timestamp '" + value[key].get<std::string>() + "'");
      return *ts;
    };
    return date_range(std::move(id), bound("start"), bound("end"));
  }
  if (!value.is_string()) fail(ErrorCode::InvalidFilter, "filter value must be a string");
  const auto raw = value.get<std::string>();
  if (field == FilterField::correspondent) return correspondent(std::move(id), raw);
  return term(std::move(id), field, raw);
}

std::string Filter::key() const {
  std::string out(to_string(field_));
  out += ':';
  if (const auto* t = std::get_if<Term>(&value_)) {
    out += *t;
  } else if (const auto* a = std::get_if<Address>(&value_)) {
    out += a->canonical();
  } else {
    const auto& r = std::get<DateRange>(value_);
    out += format_iso8601(r.start) + "/" + format_iso8601(r.end);
  }
  return out;
}

nlohmann::json Filter::value_json() const {
  if (const auto* t = std::get_if<Term>(&value_)) return *t;
  if (const auto* a = std::get_if<Address>(&value_)) return a->canonical();
  const auto& r = std::get<DateRange>(value_);
  return {{"start", format_iso8601(r.start)}, {"end", format_iso8601(r.end)}};
}

nlohmann::json Filter::to_json() const {
  return {{"filter_id", id_}, {"field", to_string(field_)}, {"value", value_json()}};
}

const Filter* QueryStack::find(std::string_view filter_id) const {
  const auto it = std::find_if(filters_.begin(), filters_.end(), [&](const Filter& f) { return f.id() == filter_id; });
  return it == filters_.end() ? nullptr : &*it;
}

QueryStack push_filter(QueryStack stack, Filter f) {
  const std::string key = f.key();
  for (const auto& existing : stack.filters_) {
    if (existing.key() == key) fail(ErrorCode::DuplicateFilter, "filter " + key + " is already applied");
    if (existing.id() == f.id()) fail(ErrorCode::InvalidFilter, "filter id " + f.id() + " is already in use");
  }
  stack.filters_.push_back(std::move(f));
  return stack;
}

QueryStack remove_filter(QueryStack stack, std::string_view filter_id) {
  const auto it = std::find_if(stack.filters_.begin(), stack.filters_.end(),
                               [&](const Filter& f) { return f.id() == filter_id; });
  if (it == stack.filters_.end()) fail(ErrorCode::UnknownFilter, "no filter with id '" + std::string(filter_id) + "'");
  stack.filters_.erase(it);
  return stack;
}

std::string stack_fingerprint(std::span<const Filter> filters) {
  std::vector<std::string> keys;
  keys.reserve(filters.size());
  for (const auto& f : filters) keys.push_back(f.key());
  std::sort(keys.begin(), keys.end());
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& k : keys) {
    for (char c : k) mix(static_cast<unsigned char>(c));
    mix(0);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool ResultSet::contains(DocId d) const { return std::binary_search(doc_ids.begin(), doc_ids.end(), d); }

namespace {

std::vector<DocId> matching(const Filter& f, const Dataset& dataset) {
  std::vector<DocId> out;
  switch (f.field()) {
    case FilterField::subject:
    case FilterField::content: {
      const Field wanted = f.field() == FilterField::subject ? Field::subject : Field::body;
      for (const auto& p : dataset.index().postings(std::get<Term>(f.value()))) {
        if (p.field == wanted) out.push_back(p.doc);
      }
      break;
    }
    case FilterField::correspondent: {
      const auto docs = dataset.docs_with(std::get<Address>(f.value()).canonical());
      out.assign(docs.begin(), docs.end());
      break;
    }
    case FilterField::date_range: {
      const auto& r = std::get<DateRange>(f.value());
      out = dataset.docs_between(r.start, r.end);
      break;
    }
  }
  return out;
}

}  // namespace

ResultSet evaluate(const QueryStack& stack, const Dataset& dataset) {
  if (stack.dataset_id() != dataset.id()) {
    fail(ErrorCode::DatasetMismatch,
         "query stack targets dataset '" + stack.dataset_id() + "' but was evaluated against '" + dataset.id() + "'");
  }
  ResultSet result;
  result.evaluated_against = dataset.id();
  result.fingerprint = stack_fingerprint(stack.filters());
  const auto all = dataset.index().docs();
  result.doc_ids.assign(all.begin(), all.end());
  for (const auto& f : stack.filters()) {
    const auto hits = matching(f, dataset);
    std::vector<DocId> narrowed;
    std::set_intersection(result.doc_ids.begin(), result.doc_ids.end(), hits.begin(), hits.end(),
                          std::back_inserter(narrowed));
    result.doc_ids = std::move(narrowed);
    if (result.doc_ids.empty()) break;
  }
  return result;
}

}  // namespace mailscope
