#include <algorithm>
#include <fstream>
#include <random>

#include "mailscope/error.hpp"
#include "mailscope/ingest.hpp"
#include "mailscope/text.hpp"

namespace mailscope {

ParseResult parse_stream(std::istream& in, SourceFormat format, const SchemaMap& schema_map) {
  switch (format) {
    case SourceFormat::mbox: return parse_mbox(in);
    case SourceFormat::eml: return parse_eml(in);
    case SourceFormat::csv: return parse_tabular(in, schema_map);
    case SourceFormat::jsonl: return parse_jsonl(in);
  }
  fail(ErrorCode::UnknownFormat, "unknown source format");
}

ParseResult parse_path(const std::filesystem::path& path, SourceFormat format, const SchemaMap& schema_map) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (format == SourceFormat::eml && fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      if (entry.is_regular_file() && text::iequals(entry.path().extension().string(), ".eml")) {
        files.push_back(entry.path());
      }
    }
    if (ec) fail(ErrorCode::UnreadableStream, "cannot list " + path.string());
    std::sort(files.begin(), files.end());
    ParseResult result;
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) fail(ErrorCode::UnreadableStream, "cannot open " + file.string());
      try {
        auto one = parse_eml(in);
        result.records.push_back(std::move(one.records.front()));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyCorpus) throw;
        ++result.skipped;
      }
    }
    std::uint32_t ordinal = 1;
    for (auto& r : result.records) r.doc_id = DocId{ordinal++};
    if (result.records.empty()) fail(ErrorCode::EmptyCorpus, "no .eml messages could be parsed in " + path.string());
    return result;
  }
  if (!fs::is_regular_file(path, ec)) fail(ErrorCode::UnreadableStream, "cannot read " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::UnreadableStream, "cannot open " + path.string());
  return parse_stream(in, format, schema_map);
}

std::vector<EmailRecord> synthesize_corpus(std::vector<EmailRecord> records, std::span<const std::string> body_pool,
                                           std::uint64_t seed) {
  if (body_pool.empty()) fail(ErrorCode::EmptyPool, "synthetic body pool is empty");
  // mt19937_64's output sequence is fixed by the standard, so assignments
  // are reproducible across platforms.
  std::mt19937_64 rng(seed);
  for (auto& r : records) {
    if (!r.body.empty()) continue;
    r.body = body_pool[rng() % body_pool.size()];
    r.synthetic_body = true;
  }
  return records;
}

std::vector<std::string> read_body_pool(std::istream& in) {
  std::vector<std::string> pool;
  std::string current;
  std::string line;
  const auto flush = [&] {
    const auto trimmed = text::trim(current);
    if (!trimmed.empty()) pool.push_back(text::sanitize_utf8(trimmed));
    current.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "%%") {
      flush();
    } else {
      current += line;
      current += '\n';
    }
  }
  flush();
  return pool;
}

}  // namespace mailscope
