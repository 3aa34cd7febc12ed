#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mailscope::text {

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Replaces every ill-formed UTF-8 sequence with U+FFFD. Never drops bytes
// silently: each maximal invalid subpart becomes one replacement character.
std::string sanitize_utf8(std::string_view bytes);

// Decodes (possibly ill-formed) UTF-8 into code points, substituting U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view cps);

std::string latin1_to_utf8(std::string_view bytes);

// Unicode-aware classification and lowercase mapping.
bool is_alnum(char32_t cp) noexcept;
char32_t fold_case(char32_t cp) noexcept;

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s) noexcept;
bool iequals(std::string_view a, std::string_view b) noexcept;
bool starts_with_icase(std::string_view s, std::string_view prefix) noexcept;
std::vector<std::string_view> split_lines(std::string_view s);

// Transfer-encoding decoders used for best-effort MIME text extraction.
std::string decode_base64(std::string_view in);
std::string decode_quoted_printable(std::string_view in, bool header_mode = false);
// RFC 2047 encoded-words ("=?utf-8?B?...?="); unknown charsets pass through.
std::string decode_encoded_words(std::string_view header_value);
// Converts decoded bytes in the given charset to UTF-8 (utf-8, us-ascii and
// latin-1 family are recognised; anything else is sanitised as UTF-8).
std::string charset_to_utf8(std::string_view bytes, std::string_view charset);

}  // namespace mailscope::text
