#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace mailscope {

// A UTC instant at one-second resolution.
using Timestamp = std::chrono::sys_seconds;

// "Thu, 31 Oct 2002 02:38:20 +0000" and the obsolete variants RFC 5322
// still permits (two-digit years, named zones, missing seconds/weekday).
std::optional<Timestamp> parse_rfc5322_date(std::string_view text);

// "2003-05-01", "2003-05-01T10:20:30Z", "2003-05-01 10:20:30+02:00",
// fractional seconds are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// Tries ISO-8601 first, then RFC 5322.
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp ts);

}  // namespace mailscope
