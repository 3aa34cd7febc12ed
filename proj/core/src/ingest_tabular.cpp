#include <algorithm>
#include <array>
#include <istream>
#include <iterator>

#include <json.hpp>

#include "mailscope/error.hpp"
#include "mailscope/ingest.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

namespace detail {

std::vector<std::vector<std::string>> parse_csv(std::string_view data) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_content || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        row_has_content = false;
        break;
      default:
        field.push_back(c);
        row_has_content = true;
    }
  }
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

namespace {

std::string read_all(std::istream& in) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) fail(ErrorCode::UnreadableStream, "read error");
  return data;
}

bool is_known_field(std::string_view f) {
  return std::find(std::begin(kTabularFields), std::end(kTabularFields), f) != std::end(kTabularFields);
}

SchemaMap detect_schema(const std::vector<std::string>& header) {
  struct Alias {
    std::string_view field;
    std::array<std::string_view, 5> names;
  };
  static constexpr std::array<Alias, 5> aliases = {{
      {"sender", {"sender", "from", "from_address", "sender_email", "author"}},
      {"recipients", {"recipients", "to", "recipient", "to_address", "receiver"}},
      {"subject", {"subject", "title", "", "", ""}},
      {"body", {"body", "content", "text", "message", "email_body"}},
      {"timestamp", {"timestamp", "date", "datetime", "time", "sent_at"}},
  }};
  SchemaMap map;
  for (const auto& alias : aliases) {
    for (std::string_view name : alias.names) {
      if (name.empty()) continue;
      const auto it = std::find_if(header.begin(), header.end(),
                                   [&](const std::string& h) { return text::iequals(text::trim(h), name); });
      if (it != header.end()) {
        map[std::string(alias.field)] = *it;
        break;
      }
    }
  }
  return map;
}

std::optional<EmailRecord> make_record(std::string_view sender, std::string_view recipients, std::string subject,
                                       std::string body, std::string_view timestamp, SourceFormat format) {
  EmailRecord r;
  try {
    r.sender = normalize_address(text::sanitize_utf8(sender));
  } catch (const Error&) {
    return std::nullopt;
  }
  r.recipients = parse_address_list(text::sanitize_utf8(recipients)).addresses;
  if (r.recipients.empty()) return std::nullopt;
  r.subject = text::sanitize_utf8(text::trim(subject));
  r.body = text::sanitize_utf8(text::trim(body));
  if (!text::trim(timestamp).empty()) r.timestamp = parse_timestamp(timestamp);
  r.source_format = format;
  return r;
}

void finish(ParseResult& result) {
  std::uint32_t ordinal = 1;
  for (auto& r : result.records) r.doc_id = DocId{ordinal++};
  if (result.records.empty()) fail(ErrorCode::EmptyCorpus, "no rows could be parsed");
}

}  // namespace

ParseResult parse_tabular(std::istream& in, const SchemaMap& requested) {
  const std::string data = read_all(in);
  auto rows = detail::parse_csv(data);
  if (rows.empty()) fail(ErrorCode::EmptyCorpus, "CSV has no header row");
  const std::vector<std::string> header = rows.front();

  const SchemaMap schema = requested.empty() ? detect_schema(header) : requested;
  std::map<std::string, std::size_t> column_of;
  for (const auto& [field, column] : schema) {
    if (!is_known_field(field)) fail(ErrorCode::InvalidArgument, "unknown record field '" + field + "' in schema map");
    const auto it = std::find_if(header.begin(), header.end(),
                                 [&](const std::string& h) { return text::trim(h) == text::trim(column); });
    if (it == header.end()) fail(ErrorCode::MissingColumn, "column '" + column + "' not present in header");
    column_of[field] = static_cast<std::size_t>(it - header.begin());
  }
  if (!column_of.contains("sender")) fail(ErrorCode::MissingColumn, "schema map must name a sender column");
  if (!column_of.contains("body") && !column_of.contains("subject")) {
    fail(ErrorCode::MissingColumn, "schema map must name a body or subject column");
  }

  ParseResult result;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto cell = [&](std::string_view field) -> std::string_view {
      const auto it = column_of.find(std::string(field));
      if (it == column_of.end() || it->second >= row.size()) return {};
      return row[it->second];
    };
    auto record = make_record(cell("sender"), cell("recipients"), std::string(cell("subject")),
                              std::string(cell("body")), cell("timestamp"), SourceFormat::csv);
    if (record) {
      result.records.push_back(std::move(*record));
    } else {
      ++result.skipped;
    }
  }
  finish(result);
  return result;
}

ParseResult parse_jsonl(std::istream& in) {
  ParseResult result;
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("sender") || !j["sender"].is_string()) {
      ++result.skipped;
      continue;
    }
    std::string recipients;
    if (const auto it = j.find("recipients"); it != j.end()) {
      if (it->is_string()) {
        recipients = it->get<std::string>();
      } else if (it->is_array()) {
        for (const auto& r : *it) {
          if (!r.is_string()) continue;
          if (!recipients.empty()) recipients += ", ";
          recipients += r.get<std::string>();
        }
      }
    }
    const auto str = [&](const char* key) {
      const auto it = j.find(key);
      return it != j.end() && it->is_string() ? it->get<std::string>() : std::string();
    };
    auto record = make_record(j["sender"].get<std::string>(), recipients, str("subject"), str("body"),
                              str("timestamp"), SourceFormat::jsonl);
    if (record) {
      result.records.push_back(std::move(*record));
    } else {
      ++result.skipped;
    }
  }
  if (in.bad()) fail(ErrorCode::UnreadableStream, "read error");
  finish(result);
  return result;
}

}  // namespace mailscope
