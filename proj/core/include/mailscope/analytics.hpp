#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mailscope/dataset.hpp"
#include "mailscope/query.hpp"

namespace mailscope {

struct CorrespondentStat {
  std::string address;
  std::uint64_t sent = 0;
  std::uint64_t received = 0;

  std::uint64_t total() const noexcept { return sent + received; }
  friend bool operator==(const CorrespondentStat&, const CorrespondentStat&) = default;
};

// Sorted by total descending, then address ascending. Every recipient of a
// multi-recipient email counts one full received email.
std::vector<CorrespondentStat> correspondent_stats(const ResultSet& results, const Dataset& dataset);

enum class Granularity { day, month, year };

std::string_view to_string(Granularity g) noexcept;
std::optional<Granularity> parse_granularity(std::string_view name);

struct TimeBin {
  std::string bucket;  // "2003", "2003-05" or "2003-05-01" (UTC)
  std::uint64_t count = 0;

  friend bool operator==(const TimeBin&, const TimeBin&) = default;
};

// Chronological; undated docs and empty buckets are omitted.
std::vector<TimeBin> timeline_bins(const ResultSet& results, const Dataset& dataset, Granularity granularity);

}  // namespace mailscope
