#include "mailscope/time.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "mailscope/text.hpp"

namespace mailscope {

namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  void skip_space() {
    while (!done() && (std::isspace(static_cast<unsigned char>(s_[pos_])) != 0)) ++pos_;
  }
  // RFC 5322 CFWS: whitespace and parenthesised comments.
  void skip_cfws() {
    for (;;) {
      skip_space();
      if (peek() != '(') return;
      int depth = 0;
      while (!done()) {
        const char c = s_[pos_++];
        if (c == '(') ++depth;
        if (c == ')' && --depth == 0) break;
      }
    }
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  std::optional<int> number(int min_digits, int max_digits) {
    int value = 0;
    int digits = 0;
    while (!done() && digits < max_digits && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) {
      value = value * 10 + (s_[pos_] - '0');
      ++pos_;
      ++digits;
    }
    if (digits < min_digits) return std::nullopt;
    return value;
  }
  int digits_ahead() const {
    int n = 0;
    while (pos_ + n < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + n])) != 0) ++n;
    return n;
  }
  std::string_view word() {
    const std::size_t start = pos_;
    while (!done() && std::isalpha(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::string_view rest() const { return s_.substr(std::min(pos_, s_.size())); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> make_instant(int y, int mo, int d, int h, int mi, int s, int offset_minutes) {
  if (mo < 1 || mo > 12 || h > 23 || mi > 59 || s > 60) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  if (s == 60) s = 59;
  const Timestamp local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
  return local - minutes{offset_minutes};
}

std::optional<int> month_from_name(std::string_view name) {
  static constexpr std::array<std::string_view, 12> names = {"jan", "feb", "mar", "apr", "may", "jun",
                                                             "jul", "aug", "sep", "oct", "nov", "dec"};
  if (name.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (text::iequals(name.substr(0, 3), names[i])) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

std::optional<int> named_zone_offset(std::string_view zone) {
  struct Zone {
    std::string_view name;
    int minutes;
  };
  static constexpr std::array<Zone, 12> zones = {{{"UT", 0},
                                                  {"UTC", 0},
                                                  {"GMT", 0},
                                                  {"Z", 0},
                                                  {"EST", -300},
                                                  {"EDT", -240},
                                                  {"CST", -360},
                                                  {"CDT", -300},
                                                  {"MST", -420},
                                                  {"MDT", -360},
                                                  {"PST", -480},
                                                  {"PDT", -420}}};
  for (const auto& z : zones) {
    if (text::iequals(zone, z.name)) return z.minutes;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Timestamp> parse_rfc5322_date(std::string_view input) {
  Cursor c(text::trim(input));
  c.skip_cfws();
  // optional day-of-week
  if (std::isalpha(static_cast<unsigned char>(c.peek())) != 0) {
    c.word();
    c.skip_cfws();
    c.eat(',');
    c.skip_cfws();
  }
  const auto day_num = c.number(1, 2);
  if (!day_num) return std::nullopt;
  c.skip_cfws();
  c.eat('-');
  const auto mon = month_from_name(c.word());
  if (!mon) return std::nullopt;
  c.skip_cfws();
  c.eat('-');
  const int year_digits = c.digits_ahead();
  auto yr = c.number(2, 4);
  if (!yr) return std::nullopt;
  if (year_digits == 2) {
    *yr += (*yr < 50) ? 2000 : 1900;
  } else if (year_digits == 3) {
    *yr += 1900;
  }
  c.skip_cfws();
  int h = 0, mi = 0, s = 0;
  if (c.digits_ahead() > 0) {
    const auto hh = c.number(1, 2);
    if (!hh || !c.eat(':')) return std::nullopt;
    const auto mm = c.number(2, 2);
    if (!mm) return std::nullopt;
    h = *hh;
    mi = *mm;
    if (c.eat(':')) {
      const auto ss = c.number(2, 2);
      if (!ss) return std::nullopt;
      s = *ss;
    }
  }
  c.skip_cfws();
  int offset = 0;
  if (c.peek() == '+' || c.peek() == '-') {
    const bool negative = c.peek() == '-';
    c.eat(c.peek());
    const auto hhmm = c.number(4, 4);
    if (!hhmm) return std::nullopt;
    offset = (*hhmm / 100) * 60 + (*hhmm % 100);
    if (negative) offset = -offset;
  } else if (std::isalpha(static_cast<unsigned char>(c.peek())) != 0) {
    // unknown named zones are treated as UTC (RFC 5322 obs-zone)
    offset = named_zone_offset(c.word()).value_or(0);
  }
  return make_instant(*yr, *mon, *day_num, h, mi, s, offset);
}

std::optional<Timestamp> parse_iso8601(std::string_view input) {
  Cursor c(text::trim(input));
  if (c.digits_ahead() != 4) return std::nullopt;
  const int y = *c.number(4, 4);
  if (!c.eat('-')) return std::nullopt;
  const auto mo = c.number(2, 2);
  if (!mo || !c.eat('-')) return std::nullopt;
  const auto d = c.number(2, 2);
  if (!d) return std::nullopt;
  int h = 0, mi = 0, s = 0, offset = 0;
  if (c.eat('T') || c.eat('t') || c.eat(' ')) {
    const auto hh = c.number(2, 2);
    if (!hh || !c.eat(':')) return std::nullopt;
    const auto mm = c.number(2, 2);
    if (!mm) return std::nullopt;
    h = *hh;
    mi = *mm;
    if (c.eat(':')) {
      const auto ss = c.number(2, 2);
      if (!ss) return std::nullopt;
      s = *ss;
      if (c.eat('.') || c.eat(',')) {
        if (!c.number(1, 9)) return std::nullopt;
      }
    }
    if (c.eat('Z') || c.eat('z')) {
      offset = 0;
    } else if (c.peek() == '+' || c.peek() == '-') {
      const bool negative = c.peek() == '-';
      c.eat(c.peek());
      const auto oh = c.number(2, 2);
      if (!oh) return std::nullopt;
      c.eat(':');
      const int om = c.number(2, 2).value_or(0);
      offset = *oh * 60 + om;
      if (negative) offset = -offset;
    }
  }
  if (!text::trim(c.rest()).empty()) return std::nullopt;
  return make_instant(y, *mo, *d, h, mi, s, offset);
}

std::optional<Timestamp> parse_timestamp(std::string_view input) {
  if (auto ts = parse_iso8601(input)) return ts;
  return parse_rfc5322_date(input);
}

std::string format_iso8601(Timestamp ts) {
  const sys_days day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss<seconds> tod{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

}  // namespace mailscope
