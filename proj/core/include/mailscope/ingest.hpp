#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mailscope/email_record.hpp"

namespace mailscope {

// Records parsed from one source plus the number of input messages/rows
// that could not be turned into a valid record. records.size() + skipped
// always equals the number of messages/rows seen.
struct ParseResult {
  std::vector<EmailRecord> records;
  std::size_t skipped = 0;

  std::size_t total() const noexcept { return records.size() + skipped; }
};

// Maps record fields ("sender", "recipients", "subject", "body",
// "timestamp") to column names in a tabular source. An empty map means
// auto-detect from common header names (from/to/date/...).
using SchemaMap = std::map<std::string, std::string>;

inline constexpr std::string_view kTabularFields[] = {"sender", "recipients", "subject", "body", "timestamp"};

ParseResult parse_mbox(std::istream& in);
ParseResult parse_eml(std::istream& in);
ParseResult parse_tabular(std::istream& in, const SchemaMap& schema_map);
ParseResult parse_jsonl(std::istream& in);

ParseResult parse_stream(std::istream& in, SourceFormat format, const SchemaMap& schema_map = {});

// Opens path and dispatches on format. For eml, path may also be a
// directory, in which case every *.eml file in it is read in name order.
ParseResult parse_path(const std::filesystem::path& path, SourceFormat format, const SchemaMap& schema_map = {});

// Fills every empty body from body_pool, choosing deterministically from
// seed. Filled records get synthetic_body = true; nothing else changes.
std::vector<EmailRecord> synthesize_corpus(std::vector<EmailRecord> records, std::span<const std::string> body_pool,
                                           std::uint64_t seed);

// Reads a body pool file: bodies separated by lines consisting of "%%".
std::vector<std::string> read_body_pool(std::istream& in);

namespace detail {

// Parses one RFC 5322 message. Returns nullopt when no usable sender or
// recipient can be found.
std::optional<EmailRecord> parse_message(std::string_view raw, SourceFormat format);

std::vector<std::vector<std::string>> parse_csv(std::string_view data);

}  // namespace detail

}  // namespace mailscope
