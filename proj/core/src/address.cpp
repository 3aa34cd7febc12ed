#include "mailscope/address.hpp"

#include <algorithm>

#include "mailscope/error.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

namespace {

std::string fold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : text::decode_utf8(s)) text::append_utf8(out, text::fold_case(cp));
  return out;
}

std::string_view strip_quotes(std::string_view s) {
  s = text::trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  if (s.size() >= 2 && s.front() == '\'' && s.back() == '\'') s = s.substr(1, s.size() - 2);
  return text::trim(s);
}

std::optional<std::string> make_display_name(std::string_view raw) {
  std::string name = text::decode_encoded_words(strip_quotes(raw));
  std::string_view trimmed = text::trim(name);
  if (trimmed.empty()) return std::nullopt;
  return std::string(trimmed);
}

}  // namespace

bool is_valid_canonical(std::string_view c) noexcept {
  const auto at = c.find('@');
  if (at == std::string_view::npos || at == 0 || at + 1 >= c.size()) return false;
  if (c.find('@', at + 1) != std::string_view::npos) return false;
  return std::none_of(c.begin(), c.end(), [](char ch) {
    const auto u = static_cast<unsigned char>(ch);
    return u <= 0x20 || ch == '<' || ch == '>' || ch == ',' || ch == ';' || ch == '"' || ch == '(' ||
           ch == ')' || ch == '[' || ch == ']' || ch == '\\' || u == 0x7F;
  });
}

Address Address::from_parts(std::string canonical, std::optional<std::string> display_name) {
  if (!is_valid_canonical(canonical) || fold(canonical) != canonical) {
    fail(ErrorCode::InvalidAddress, "'" + canonical + "' is not a canonical address");
  }
  return Address(std::move(canonical), std::move(display_name));
}

Address normalize_address(std::string_view raw) {
  std::string_view s = text::trim(raw);
  std::string_view spec;
  std::optional<std::string> display;

  const auto lt = s.rfind('<');
  const auto gt = lt == std::string_view::npos ? lt : s.find('>', lt);
  if (lt != std::string_view::npos && gt != std::string_view::npos) {
    spec = s.substr(lt + 1, gt - lt - 1);
    display = make_display_name(s.substr(0, lt));
  } else {
    spec = s;
    const auto paren = spec.find('(');
    if (paren != std::string_view::npos) {
      const auto close = spec.find(')', paren);
      display = make_display_name(spec.substr(paren + 1, (close == std::string_view::npos ? spec.size() : close) - paren - 1));
      spec = spec.substr(0, paren);
    }
    spec = text::trim(spec);
    while (!spec.empty() && (spec.front() == '<' || spec.front() == '"')) spec.remove_prefix(1);
    while (!spec.empty() && (spec.back() == '>' || spec.back() == '"')) spec.remove_suffix(1);
  }
  spec = text::trim(spec);
  if (text::starts_with_icase(spec, "mailto:")) spec.remove_prefix(7);

  std::string canonical = fold(spec);
  if (!is_valid_canonical(canonical)) {
    fail(ErrorCode::InvalidAddress, "no local@domain address in '" + std::string(raw) + "'");
  }
  return Address(std::move(canonical), std::move(display));
}

AddressList parse_address_list(std::string_view value) {
  AddressList out;
  std::vector<std::string_view> parts;
  bool in_quote = false;
  int angle = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const char c = value[i];
    if (c == '"' && (i == 0 || value[i - 1] != '\\')) in_quote = !in_quote;
    if (in_quote) continue;
    if (c == '<') ++angle;
    if (c == '>' && angle > 0) --angle;
    if (angle > 0) continue;
    if (c == ',' || c == ';') {
      parts.push_back(value.substr(start, i - start));
      start = i + 1;
    } else if (c == ':') {
      // group display name
      start = i + 1;
    }
  }
  parts.push_back(value.substr(start));

  for (std::string_view part : parts) {
    if (text::trim(part).empty()) continue;
    try {
      out.addresses.push_back(normalize_address(part));
    } catch (const Error&) {
      ++out.invalid;
    }
  }
  return out;
}

}  // namespace mailscope
