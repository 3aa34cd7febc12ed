#include "mailscope/email_record.hpp"

#include <charconv>

#include "mailscope/error.hpp"

namespace mailscope {

std::optional<DocId> DocId::parse(std::string_view text) {
  if (text.size() < 2 || text.front() != 'd') return std::nullopt;
  std::uint32_t value = 0;
  const auto* first = text.data() + 1;
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return DocId{value};
}

std::string_view to_string(SourceFormat f) noexcept {
  switch (f) {
    case SourceFormat::mbox: return "mbox";
    case SourceFormat::eml: return "eml";
    case SourceFormat::csv: return "csv";
    case SourceFormat::jsonl: return "jsonl";
  }
  return "mbox";
}

std::optional<SourceFormat> parse_source_format(std::string_view name) {
  if (name == "mbox") return SourceFormat::mbox;
  if (name == "eml") return SourceFormat::eml;
  if (name == "csv") return SourceFormat::csv;
  if (name == "jsonl") return SourceFormat::jsonl;
  return std::nullopt;
}

namespace {

bool is_normalized(const Address& a) {
  if (!is_valid_canonical(a.canonical())) return false;
  try {
    return normalize_address(a.canonical()).canonical() == a.canonical();
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

std::optional<std::string> validate(const EmailRecord& r) {
  if (!is_normalized(r.sender)) return "sender is not a normalized address";
  if (r.recipients.empty()) return "record has no recipients";
  for (const auto& a : r.recipients) {
    if (!is_normalized(a)) return "recipient '" + a.canonical() + "' is not a normalized address";
  }
  return std::nullopt;
}

}  // namespace mailscope
