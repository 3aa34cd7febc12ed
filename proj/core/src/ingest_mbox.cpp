#include <algorithm>
#include <istream>
#include <iterator>
#include <map>

#include "mailscope/error.hpp"
#include "mailscope/ingest.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

namespace {

struct Headers {
  // lowercase name -> values in order of appearance
  std::map<std::string, std::vector<std::string>> values;

  const std::string* first(std::string_view name) const {
    const auto it = values.find(std::string(name));
    return it == values.end() || it->second.empty() ? nullptr : &it->second.front();
  }
  std::string joined(std::string_view name) const {
    const auto it = values.find(std::string(name));
    if (it == values.end()) return {};
    std::string out;
    for (const auto& v : it->second) {
      if (!out.empty()) out += ", ";
      out += v;
    }
    return out;
  }
};

struct Entity {
  Headers headers;
  std::string_view body;
};

Entity split_entity(std::string_view raw) {
  Entity e;
  std::size_t pos = 0;
  std::string current_name;
  std::string current_value;
  const auto flush = [&] {
    if (!current_name.empty()) {
      e.headers.values[current_name].push_back(std::string(text::trim(current_value)));
    }
    current_name.clear();
    current_value.clear();
  };
  while (pos < raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    const std::size_t next = nl == std::string_view::npos ? raw.size() : nl + 1;
    std::string_view line = raw.substr(pos, (nl == std::string_view::npos ? raw.size() : nl) - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      pos = next;
      flush();
      e.body = raw.substr(std::min(pos, raw.size()));
      return e;
    }
    if ((line.front() == ' ' || line.front() == '\t') && !current_name.empty()) {
      current_value += ' ';
      current_value += text::trim(line);
    } else {
      const auto colon = line.find(':');
      if (colon != std::string_view::npos && colon > 0 &&
          line.substr(0, colon).find(' ') == std::string_view::npos) {
        flush();
        current_name = text::to_lower_ascii(line.substr(0, colon));
        current_value = std::string(line.substr(colon + 1));
      } else if (current_name.empty() && pos == 0) {
        // no header block at all
        e.body = raw;
        return e;
      }
      // anything else (e.g. a stray "From " envelope line) is ignored
    }
    pos = next;
  }
  flush();
  e.body = {};
  return e;
}

// Parameter lookup in a structured header such as
// "multipart/mixed; boundary=\"abc\"; charset=utf-8".
std::string header_param(std::string_view value, std::string_view param) {
  std::size_t pos = 0;
  while ((pos = value.find(';', pos)) != std::string_view::npos) {
    ++pos;
    std::string_view rest = text::trim(value.substr(pos));
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos) continue;
    if (!text::iequals(text::trim(rest.substr(0, eq)), param)) continue;
    std::string_view v = text::trim(rest.substr(eq + 1));
    if (!v.empty() && v.front() == '"') {
      const auto close = v.find('"', 1);
      return std::string(v.substr(1, close == std::string_view::npos ? v.size() - 1 : close - 1));
    }
    const auto semi = v.find(';');
    return std::string(text::trim(v.substr(0, semi)));
  }
  return {};
}

std::string media_type(const Headers& h) {
  const std::string* ct = h.first("content-type");
  if (ct == nullptr) return "text/plain";
  return text::to_lower_ascii(text::trim(std::string_view(*ct).substr(0, ct->find(';'))));
}

std::string strip_html(std::string_view html) {
  std::string out;
  bool in_tag = false;
  for (char c : html) {
    if (c == '<') {
      in_tag = true;
    } else if (c == '>') {
      in_tag = false;
      out.push_back(' ');
    } else if (!in_tag) {
      out.push_back(c);
    }
  }
  return out;
}

std::string decode_body(const Entity& e) {
  std::string raw(e.body);
  if (const std::string* cte = e.headers.first("content-transfer-encoding")) {
    const std::string enc = text::to_lower_ascii(text::trim(*cte));
    if (enc == "base64") {
      raw = text::decode_base64(raw);
    } else if (enc == "quoted-printable") {
      raw = text::decode_quoted_printable(raw);
    }
  }
  std::string charset;
  if (const std::string* ct = e.headers.first("content-type")) charset = header_param(*ct, "charset");
  return text::charset_to_utf8(raw, charset);
}

// Best-effort plain-text extraction: text/plain parts are concatenated;
// HTML is used (tag-stripped) only when no plain part exists.
void collect_text(const Entity& e, std::string& plain, std::string& html, int depth) {
  const std::string type = media_type(e.headers);
  if (type.rfind("multipart/", 0) == 0 && depth < 8) {
    const std::string* ct = e.headers.first("content-type");
    const std::string boundary = ct != nullptr ? header_param(*ct, "boundary") : std::string();
    if (boundary.empty()) {
      plain += decode_body(e);
      return;
    }
    const std::string delim = "--" + boundary;
    std::size_t pos = e.body.find(delim);
    while (pos != std::string_view::npos) {
      std::size_t start = pos + delim.size();
      if (e.body.substr(start, 2) == "--") break;
      const auto eol = e.body.find('\n', start);
      if (eol == std::string_view::npos) break;
      start = eol + 1;
      std::size_t next = e.body.find(delim, start);
      std::string_view part = e.body.substr(start, (next == std::string_view::npos ? e.body.size() : next) - start);
      const Entity child = split_entity(part);
      const std::string* disp = child.headers.first("content-disposition");
      if (disp == nullptr || !text::starts_with_icase(text::trim(*disp), "attachment")) {
        collect_text(child, plain, html, depth + 1);
      }
      pos = next;
    }
    return;
  }
  if (type == "text/plain" || type.empty()) {
    if (!plain.empty()) plain += "\n";
    plain += decode_body(e);
  } else if (type == "text/html") {
    if (!html.empty()) html += "\n";
    html += strip_html(decode_body(e));
  } else if (type == "message/rfc822" && depth < 8) {
    collect_text(split_entity(e.body), plain, html, depth + 1);
  }
}

std::string clean_body(std::string s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '\r') out.push_back(c);
  }
  return std::string(text::trim(out));
}

}  // namespace

namespace detail {

std::optional<EmailRecord> parse_message(std::string_view raw, SourceFormat format) {
  const Entity entity = split_entity(raw);
  const std::string* from = entity.headers.first("from");
  if (from == nullptr) from = entity.headers.first("sender");
  if (from == nullptr) return std::nullopt;

  EmailRecord r;
  try {
    r.sender = normalize_address(text::sanitize_utf8(text::decode_encoded_words(*from)));
  } catch (const Error&) {
    return std::nullopt;
  }
  for (const char* field : {"to", "cc"}) {
    const std::string value = entity.headers.joined(field);
    if (value.empty()) continue;
    auto list = parse_address_list(text::sanitize_utf8(value));
    for (auto& a : list.addresses) r.recipients.push_back(std::move(a));
  }
  if (r.recipients.empty()) return std::nullopt;

  if (const std::string* subject = entity.headers.first("subject")) {
    r.subject = text::sanitize_utf8(text::decode_encoded_words(*subject));
  }
  if (const std::string* date = entity.headers.first("date")) {
    r.timestamp = parse_rfc5322_date(*date);
  }
  std::string plain, html;
  collect_text(entity, plain, html, 0);
  r.body = clean_body(plain.empty() ? html : plain);
  r.source_format = format;
  return r;
}

}  // namespace detail

namespace {

void finish(ParseResult& result) {
  std::uint32_t ordinal = 1;
  for (auto& r : result.records) r.doc_id = DocId{ordinal++};
  if (result.records.empty()) fail(ErrorCode::EmptyCorpus, "no messages could be parsed");
}

std::string read_all(std::istream& in) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) fail(ErrorCode::UnreadableStream, "read error");
  return data;
}

bool is_separator(std::string_view line) { return line.substr(0, 5) == "From "; }

// mboxrd quoting: ">From " -> "From ", ">>From " -> ">From ".
bool is_quoted_from(std::string_view line) {
  const auto first = line.find_first_not_of('>');
  return first != std::string_view::npos && first > 0 && line.substr(first, 5) == "From ";
}

}  // namespace

ParseResult parse_mbox(std::istream& in) {
  const std::string data = read_all(in);
  ParseResult result;

  std::string message;
  bool have_message = false;
  bool prev_blank = true;
  const auto flush = [&] {
    if (have_message && !text::trim(message).empty()) {
      if (auto r = detail::parse_message(message, SourceFormat::mbox)) {
        result.records.push_back(std::move(*r));
      } else {
        ++result.skipped;
      }
    }
    message.clear();
    have_message = false;
  };

  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t nl = data.find('\n', pos);
    if (nl == std::string::npos) nl = data.size();
    std::string_view line(data.data() + pos, nl - pos);
    pos = nl + 1;
    std::string_view bare = line;
    if (!bare.empty() && bare.back() == '\r') bare.remove_suffix(1);

    if (prev_blank && is_separator(bare)) {
      flush();
      have_message = true;
      prev_blank = false;
      continue;
    }
    if (!have_message && !text::trim(bare).empty()) have_message = true;
    if (is_quoted_from(bare)) {
      message.append(bare.substr(1));
    } else {
      message.append(bare);
    }
    message.push_back('\n');
    prev_blank = text::trim(bare).empty();
  }
  flush();
  finish(result);
  return result;
}

ParseResult parse_eml(std::istream& in) {
  const std::string data = read_all(in);
  ParseResult result;
  if (!text::trim(data).empty()) {
    if (auto r = detail::parse_message(data, SourceFormat::eml)) {
      result.records.push_back(std::move(*r));
    } else {
      result.skipped = 1;
    }
  }
  finish(result);
  return result;
}

}  // namespace mailscope
