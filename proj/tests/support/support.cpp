#include "support.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "mailscope/address.hpp"
#include "mailscope/time.hpp"

namespace mailscope::testing {

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(MAILSCOPE_FIXTURE_DIR) / name; }

TempDir::TempDir() {
  static std::mt19937_64 rng(std::random_device{}());
  for (;;) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "mailscope-%016llx", static_cast<unsigned long long>(rng()));
    path_ = std::filesystem::temp_directory_path() / buf;
    if (std::filesystem::create_directory(path_)) return;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

EmailRecord make_record(std::uint32_t id, const std::string& sender, const std::vector<std::string>& recipients,
                        const std::string& subject, const std::string& body, std::optional<std::string> iso_timestamp) {
  EmailRecord r;
  r.doc_id = DocId(id);
  r.sender = normalize_address(sender);
  for (const auto& to : recipients) r.recipients.push_back(normalize_address(to));
  r.subject = subject;
  r.body = body;
  if (iso_timestamp) r.timestamp = parse_iso8601(*iso_timestamp);
  return r;
}

std::shared_ptr<const Dataset> dataset_of(std::vector<EmailRecord> records, const std::string& id) {
  DatasetHandle h;
  h.dataset_id = id;
  h.record_count = records.size();
  h.label = "test";
  return make_dataset(h, std::move(records));
}

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "money",  "transfer", "bank",   "nigeria", "urgent", "account", "lottery", "winner", "meeting", "agenda",
      "budget", "invoice",  "click",  "link",    "secret", "beneficiary", "fund", "deposit", "receipt", "politics",
      "oil",    "contract", "barrister", "diplomat", "consignment", "claim", "prize", "visa", "estate", "gold"};
  return words;
}

std::vector<std::string> address_pool(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("user" + std::to_string(i) + "@host" + std::to_string(i % 3) + ".org");
  return out;
}

std::vector<EmailRecord> random_corpus(std::mt19937_64& rng, const CorpusShape& shape) {
  const auto& all = vocabulary();
  const std::size_t v = std::min(shape.vocabulary, all.size());
  const auto pool = address_pool(shape.addresses);
  std::uniform_int_distribution<std::size_t> word(0, v - 1);
  std::uniform_int_distribution<std::size_t> person(0, pool.size() - 1);
  std::uniform_int_distribution<std::size_t> subject_len(0, shape.max_subject_words);
  std::uniform_int_distribution<std::size_t> body_len(0, shape.max_body_words);
  std::uniform_int_distribution<std::size_t> fanout(1, 3);
  // 2000-01-01 .. 2009-12-31
  std::uniform_int_distribution<std::int64_t> when(946684800, 1262303999);
  std::bernoulli_distribution undated(shape.undated_share);
  std::bernoulli_distribution shout(0.2);

  const auto words = [&](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
      std::string w = all[word(rng)];
      if (shout(rng)) std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::toupper(c); });
      if (!s.empty()) s += (i % 4 == 3) ? ", " : " ";
      s += w;
    }
    return s;
  };

  std::vector<EmailRecord> out;
  for (std::size_t i = 0; i < shape.docs; ++i) {
    EmailRecord r;
    r.doc_id = DocId(static_cast<std::uint32_t>(i + 1));
    r.sender = normalize_address(pool[person(rng)]);
    const std::size_t n = fanout(rng);
    for (std::size_t j = 0; j < n; ++j) {
      Address a = normalize_address(pool[person(rng)]);
      if (std::find(r.recipients.begin(), r.recipients.end(), a) == r.recipients.end()) r.recipients.push_back(a);
    }
    r.subject = words(subject_len(rng));
    r.body = words(body_len(rng));
    if (!undated(rng)) r.timestamp = Timestamp(std::chrono::seconds(when(rng)));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mailscope::testing

namespace mailscope::oracle {

std::vector<std::string> ascii_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : text + " ") {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else {
      if (cur.size() >= 2) out.push_back(cur);
      cur.clear();
    }
  }
  return out;
}

std::size_t occurrences(const EmailRecord& r, const std::string& term) {
  const auto s = ascii_tokens(r.subject);
  const auto b = ascii_tokens(r.body);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), term) + std::count(b.begin(), b.end(), term));
}

double tfidf(const std::vector<EmailRecord>& corpus, const std::string& term, const EmailRecord& doc) {
  const std::size_t f = occurrences(doc, term);
  if (f == 0) return 0.0;
  std::size_t df = 0;
  for (const auto& r : corpus) df += occurrences(r, term) > 0 ? 1 : 0;
  return static_cast<double>(f) * std::log(static_cast<double>(corpus.size()) / static_cast<double>(df));
}

bool matches(const EmailRecord& r, const Filter& f) {
  const auto has = [](const std::string& text, const std::string& t) {
    const auto toks = ascii_tokens(text);
    return std::find(toks.begin(), toks.end(), t) != toks.end();
  };
  switch (f.field()) {
    case FilterField::content:
      return has(r.body, std::get<Term>(f.value()));
    case FilterField::subject:
      return has(r.subject, std::get<Term>(f.value()));
    case FilterField::correspondent: {
      const std::string& a = std::get<Address>(f.value()).canonical();
      if (r.sender.canonical() == a) return true;
      return std::any_of(r.recipients.begin(), r.recipients.end(), [&](const Address& x) { return x.canonical() == a; });
    }
    case FilterField::date_range: {
      const auto& range = std::get<DateRange>(f.value());
      return r.timestamp && *r.timestamp >= range.start && *r.timestamp <= range.end;
    }
  }
  return false;
}

std::vector<DocId> evaluate(const std::vector<EmailRecord>& corpus, const std::vector<Filter>& filters) {
  std::vector<DocId> out;
  for (const auto& r : corpus) {
    if (std::all_of(filters.begin(), filters.end(), [&](const Filter& f) { return matches(r, f); })) {
      out.push_back(r.doc_id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::uint64_t> timeline(const std::vector<EmailRecord>& corpus, const std::vector<DocId>& docs,
                                              int digits) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& r : corpus) {
    if (!r.timestamp || std::find(docs.begin(), docs.end(), r.doc_id) == docs.end()) continue;
    // civil-from-days, independent of <chrono> calendar types
    std::int64_t z = r.timestamp->time_since_epoch().count();
    z = (z >= 0 ? z : z - 86399) / 86400 + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const std::int64_t doe = z - era * 146097;
    const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::int64_t mp = (5 * doy + 2) / 153;
    const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
    const std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
    const std::int64_t y = yoe + era * 400 + (m <= 2 ? 1 : 0);
    char buf[16];
    if (digits == 4) {
      std::snprintf(buf, sizeof buf, "%04lld", static_cast<long long>(y));
    } else if (digits == 7) {
      std::snprintf(buf, sizeof buf, "%04lld-%02lld", static_cast<long long>(y), static_cast<long long>(m));
    } else {
      std::snprintf(buf, sizeof buf, "%04lld-%02lld-%02lld", static_cast<long long>(y), static_cast<long long>(m),
                    static_cast<long long>(d));
    }
    ++out[buf];
  }
  return out;
}

double best_partition_objective(const std::vector<std::vector<double>>& unit_vectors, int k) {
  const std::size_t n = unit_vectors.size();
  const std::size_t dim = n == 0 ? 0 : unit_vectors[0].size();
  std::vector<int> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  // restricted growth strings enumerate each set partition exactly once
  std::function<void(std::size_t, int)> walk = [&](std::size_t i, int used) {
    if (i == n) {
      double obj = 0.0;
      for (int g = 0; g < used; ++g) {
        std::vector<double> sum(dim, 0.0);
        std::size_t size = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (label[j] != g) continue;
          ++size;
          for (std::size_t t = 0; t < dim; ++t) sum[t] += unit_vectors[j][t];
        }
        double norm = 0.0;
        for (const double x : sum) norm += x * x;
        obj += static_cast<double>(size) - std::sqrt(norm);
      }
      best = std::min(best, obj);
      return;
    }
    for (int g = 0; g < std::min(used + 1, k); ++g) {
      label[i] = g;
      walk(i + 1, std::max(used, g + 1));
    }
  };
  walk(0, 0);
  return best;
}

}  // namespace mailscope::oracle
