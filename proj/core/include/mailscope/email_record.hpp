#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mailscope/address.hpp"
#include "mailscope/time.hpp"

namespace mailscope {

// Identifies a record within one dataset. Rendered as "d<ordinal>" and
// ordered numerically, so d2 < d10.
class DocId {
 public:
  constexpr DocId() = default;
  constexpr explicit DocId(std::uint32_t ordinal) : ordinal_(ordinal) {}

  constexpr std::uint32_t ordinal() const noexcept { return ordinal_; }
  std::string str() const { return "d" + std::to_string(ordinal_); }
  static std::optional<DocId> parse(std::string_view text);

  friend constexpr auto operator<=>(DocId, DocId) = default;

 private:
  std::uint32_t ordinal_ = 0;
};

enum class SourceFormat { mbox, eml, csv, jsonl };

std::string_view to_string(SourceFormat f) noexcept;
std::optional<SourceFormat> parse_source_format(std::string_view name);

struct EmailRecord {
  DocId doc_id;
  Address sender;
  std::vector<Address> recipients;
  std::string subject;
  std::string body;
  std::optional<Timestamp> timestamp;
  SourceFormat source_format = SourceFormat::mbox;
  bool synthetic_body = false;

  friend bool operator==(const EmailRecord&, const EmailRecord&) = default;
};

// Checks every type invariant on a record; returns a description of the
// first violation, or nullopt when the record is well-formed.
std::optional<std::string> validate(const EmailRecord& record);

}  // namespace mailscope

template <>
struct std::hash<mailscope::DocId> {
  std::size_t operator()(mailscope::DocId id) const noexcept { return std::hash<std::uint32_t>{}(id.ordinal()); }
};
