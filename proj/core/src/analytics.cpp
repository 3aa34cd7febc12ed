#include "mailscope/analytics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <tuple>

namespace mailscope {

std::vector<CorrespondentStat> correspondent_stats(const ResultSet& results, const Dataset& dataset) {
  std::map<std::string, CorrespondentStat, std::less<>> by_address;
  const auto stat_for = [&](const Address& a) -> CorrespondentStat& {
    auto [it, inserted] = by_address.try_emplace(a.canonical());
    if (inserted) it->second.address = a.canonical();
    return it->second;
  };
  for (const DocId d : results.doc_ids) {
    const auto& r = dataset.record(d);
    ++stat_for(r.sender).sent;
    for (const auto& a : r.recipients) ++stat_for(a).received;
  }
  std::vector<CorrespondentStat> out;
  out.reserve(by_address.size());
  for (auto& [_, s] : by_address) out.push_back(std::move(s));
  std::stable_sort(out.begin(), out.end(),
                   [](const CorrespondentStat& a, const CorrespondentStat& b) { return a.total() > b.total(); });
  return out;
}

std::string_view to_string(Granularity g) noexcept {
  switch (g) {
    case Granularity::day: return "day";
    case Granularity::month: return "month";
    case Granularity::year: return "year";
  }
  return "day";
}

std::optional<Granularity> parse_granularity(std::string_view name) {
  if (name == "day") return Granularity::day;
  if (name == "month") return Granularity::month;
  if (name == "year") return Granularity::year;
  return std::nullopt;
}

std::vector<TimeBin> timeline_bins(const ResultSet& results, const Dataset& dataset, Granularity granularity) {
  using namespace std::chrono;
  std::map<std::tuple<int, unsigned, unsigned>, std::uint64_t> counts;
  for (const DocId d : results.doc_ids) {
    const auto& r = dataset.record(d);
    if (!r.timestamp) continue;
    const year_month_day ymd{floor<days>(*r.timestamp)};
    const int y = static_cast<int>(ymd.year());
    const unsigned m = granularity == Granularity::year ? 0U : static_cast<unsigned>(ymd.month());
    const unsigned dd = granularity == Granularity::day ? static_cast<unsigned>(ymd.day()) : 0U;
    ++counts[{y, m, dd}];
  }
  std::vector<TimeBin> out;
  out.reserve(counts.size());
  char buf[32];
  for (const auto& [key, count] : counts) {
    const auto [y, m, dd] = key;
    switch (granularity) {
      case Granularity::year: std::snprintf(buf, sizeof buf, "%04d", y); break;
      case Granularity::month: std::snprintf(buf, sizeof buf, "%04d-%02u", y, m); break;
      case Granularity::day: std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, dd); break;
    }
    out.push_back(TimeBin{buf, count});
  }
  return out;
}

}  // namespace mailscope
