#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mailscope/dataset.hpp"
#include "mailscope/email_record.hpp"
#include "mailscope/query.hpp"

namespace mailscope::testing {

std::filesystem::path fixture(const std::string& name);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

EmailRecord make_record(std::uint32_t id, const std::string& sender, const std::vector<std::string>& recipients,
                        const std::string& subject, const std::string& body,
                        std::optional<std::string> iso_timestamp = std::nullopt);

std::shared_ptr<const Dataset> dataset_of(std::vector<EmailRecord> records, const std::string& id = "ds-test");

struct CorpusShape {
  std::size_t docs = 20;
  std::size_t vocabulary = 20;
  std::size_t addresses = 6;
  std::size_t max_subject_words = 3;
  std::size_t max_body_words = 12;
  double undated_share = 0.1;
};

// Words of the random vocabulary, none of them entity stopwords.
const std::vector<std::string>& vocabulary();
std::vector<std::string> address_pool(std::size_t n);

std::vector<EmailRecord> random_corpus(std::mt19937_64& rng, const CorpusShape& shape);

}  // namespace mailscope::testing

// Independent brute-force reference implementations. They only assume
// ASCII input, which is all the random generators produce.
namespace mailscope::oracle {

std::vector<std::string> ascii_tokens(const std::string& text);
std::size_t occurrences(const EmailRecord& r, const std::string& term);
double tfidf(const std::vector<EmailRecord>& corpus, const std::string& term, const EmailRecord& doc);

bool matches(const EmailRecord& r, const Filter& f);
std::vector<DocId> evaluate(const std::vector<EmailRecord>& corpus, const std::vector<Filter>& filters);

// "YYYY", "YYYY-MM" or "YYYY-MM-DD" -> count over the dated members.
std::map<std::string, std::uint64_t> timeline(const std::vector<EmailRecord>& corpus, const std::vector<DocId>& docs,
                                              int digits);

// Minimum spherical k-means objective over every partition of the vectors
// into at most k non-empty groups: sum over groups of |g| - |sum of unit
// vectors in g|.
double best_partition_objective(const std::vector<std::vector<double>>& unit_vectors, int k);

}  // namespace mailscope::oracle
