#include "mailscope/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "mailscope/error.hpp"

namespace mailscope {

namespace {

constexpr double kSimilarityEps = 1e-12;

struct DocVec {
  std::vector<std::uint32_t> dims;  // ascending vocabulary positions
  std::vector<double> weights;      // unit length
  bool zero = true;
};

using Dense = std::vector<double>;

double dot(const DocVec& x, const Dense& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.dims.size(); ++i) s += x.weights[i] * c[x.dims[i]];
  return s;
}

// splitmix64, used to derive independent restart seeds.
std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_real(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct RunResult {
  std::vector<int> assignment;
  std::vector<Dense> centroids;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

class SphericalKMeans {
 public:
  SphericalKMeans(const std::vector<DocVec>& vecs, std::size_t dim, int k) : vecs_(vecs), dim_(dim), k_(k) {
    for (std::size_t i = 0; i < vecs_.size(); ++i) {
      if (!vecs_[i].zero) active_.push_back(i);
    }
  }

  RunResult run(std::uint64_t run_seed, int max_iterations) const {
    std::mt19937_64 rng(run_seed);
    RunResult r;
    r.centroids = seed_centroids(rng);
    r.assignment.assign(vecs_.size(), 0);
    for (std::size_t i : active_) r.assignment[i] = best_cluster(vecs_[i], r.centroids, -1);
    while (r.iterations < max_iterations) {
      update(r.assignment, r.centroids);
      r.trace.push_back(objective(r.assignment, r.centroids));
      ++r.iterations;
      bool changed = false;
      for (std::size_t i : active_) {
        const int next = best_cluster(vecs_[i], r.centroids, r.assignment[i]);
        if (next != r.assignment[i]) {
          r.assignment[i] = next;
          changed = true;
        }
      }
      if (!changed) {
        r.converged = true;
        break;
      }
    }
    return r;
  }

  double objective(const std::vector<int>& assignment, const std::vector<Dense>& centroids) const {
    double total = 0.0;
    for (std::size_t i = 0; i < vecs_.size(); ++i) {
      total += 1.0 - (vecs_[i].zero ? 0.0 : dot(vecs_[i], centroids[static_cast<std::size_t>(assignment[i])]));
    }
    return total;
  }

 private:
  // k-means++ with cosine distance 1 - cos.
  std::vector<Dense> seed_centroids(std::mt19937_64& rng) const {
    std::vector<Dense> centroids(static_cast<std::size_t>(k_), Dense(dim_, 0.0));
    if (active_.empty()) return centroids;
    std::vector<bool> chosen(vecs_.size(), false);
    const auto place = [&](std::size_t c, std::size_t doc) {
      chosen[doc] = true;
      for (std::size_t j = 0; j < vecs_[doc].dims.size(); ++j) centroids[c][vecs_[doc].dims[j]] = vecs_[doc].weights[j];
    };
    place(0, active_[rng() % active_.size()]);
    std::vector<double> nearest(vecs_.size(), 0.0);
    for (std::size_t i : active_) nearest[i] = dot(vecs_[i], centroids[0]);
    for (int c = 1; c < k_; ++c) {
      double total = 0.0;
      for (std::size_t i : active_) {
        const double d = std::max(0.0, 1.0 - nearest[i]);
        total += d * d;
      }
      std::size_t pick = active_.back();
      if (total > 0.0) {
        double target = unit_real(rng) * total;
        for (std::size_t i : active_) {
          const double d = std::max(0.0, 1.0 - nearest[i]);
          const double w = d * d;
          if (w <= 0.0) continue;
          pick = i;
          if (target < w) break;
          target -= w;
        }
      } else {
        // every doc coincides with a chosen centre; fall back to uniform
        std::vector<std::size_t> remaining;
        for (std::size_t i : active_) {
          if (!chosen[i]) remaining.push_back(i);
        }
        const auto& pool = remaining.empty() ? active_ : remaining;
        pick = pool[rng() % pool.size()];
      }
      place(static_cast<std::size_t>(c), pick);
      for (std::size_t i : active_) nearest[i] = std::max(nearest[i], dot(vecs_[i], centroids[static_cast<std::size_t>(c)]));
    }
    return centroids;
  }

  // Most similar centroid, lowest index on ties; the current cluster is kept
  // unless another is strictly better.
  int best_cluster(const DocVec& v, const std::vector<Dense>& centroids, int current) const {
    int best = 0;
    double best_sim = dot(v, centroids[0]);
    for (int c = 1; c < k_; ++c) {
      const double s = dot(v, centroids[static_cast<std::size_t>(c)]);
      if (s > best_sim) {
        best_sim = s;
        best = c;
      }
    }
    if (current >= 0 && dot(v, centroids[static_cast<std::size_t>(current)]) >= best_sim - kSimilarityEps) {
      return current;
    }
    return best;
  }

  // Normalized mean of members; an empty cluster keeps its centroid.
  void update(const std::vector<int>& assignment, std::vector<Dense>& centroids) const {
    std::vector<Dense> sums(static_cast<std::size_t>(k_), Dense(dim_, 0.0));
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
    for (std::size_t i : active_) {
      const auto c = static_cast<std::size_t>(assignment[i]);
      ++sizes[c];
      for (std::size_t j = 0; j < vecs_[i].dims.size(); ++j) sums[c][vecs_[i].dims[j]] += vecs_[i].weights[j];
    }
    for (std::size_t c = 0; c < sums.size(); ++c) {
      if (sizes[c] == 0) continue;
      double norm = 0.0;
      for (double x : sums[c]) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& x : sums[c]) x /= norm;
      }
      centroids[c] = std::move(sums[c]);
    }
  }

  const std::vector<DocVec>& vecs_;
  std::size_t dim_;
  int k_;
  std::vector<std::size_t> active_;
};

}  // namespace

double cosine(const SparseVector& x, const SparseVector& y) {
  double dxy = 0.0, dxx = 0.0, dyy = 0.0;
  for (const auto& [_, w] : x) dxx += w * w;
  for (const auto& [_, w] : y) dyy += w * w;
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dxy += i->second * j->second;
      ++i;
      ++j;
    }
  }
  if (dxx == 0.0 || dyy == 0.0) return 0.0;
  return dxy / (std::sqrt(dxx) * std::sqrt(dyy));
}

Clustering clusterize(std::span<const DocId> docs_in, const CorpusIndex& index, int k, std::uint64_t seed,
                      const ClusterOptions& options) {
  if (docs_in.empty()) fail(ErrorCode::EmptyResults, "no documents to cluster");
  if (k < 1 || static_cast<std::size_t>(k) > docs_in.size()) {
    fail(ErrorCode::InvalidK, "k must be between 1 and " + std::to_string(docs_in.size()));
  }
  if (options.restarts < 1 || options.max_iterations < 1) {
    fail(ErrorCode::InvalidArgument, "restarts and max_iterations must be positive");
  }
  std::vector<DocId> docs(docs_in.begin(), docs_in.end());
  std::sort(docs.begin(), docs.end());

  // Vocabulary restricted to the clustered docs.
  std::map<std::string_view, std::uint32_t> vocab;
  std::vector<SparseVector> raw;
  raw.reserve(docs.size());
  for (const DocId d : docs) {
    raw.push_back(doc_vector(d, index));
    for (const auto& [term, w] : raw.back()) {
      if (w != 0.0) vocab.emplace(term, 0);
    }
  }
  std::vector<std::string_view> terms;
  terms.reserve(vocab.size());
  for (auto& [term, pos] : vocab) {
    pos = static_cast<std::uint32_t>(terms.size());
    terms.push_back(term);
  }

  std::vector<DocVec> vecs(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    double norm = 0.0;
    for (const auto& [_, w] : raw[i]) norm += w * w;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    vecs[i].zero = false;
    for (const auto& [term, w] : raw[i]) {
      if (w == 0.0) continue;
      vecs[i].dims.push_back(vocab.at(term));
      vecs[i].weights.push_back(w / norm);
    }
  }

  const SphericalKMeans km(vecs, terms.size(), k);
  RunResult best;
  int best_restart = -1;
  double best_objective = 0.0;
  for (int r = 0; r < options.restarts; ++r) {
    RunResult run = km.run(mix_seed(seed ^ mix_seed(static_cast<std::uint64_t>(r))), options.max_iterations);
    const double obj = run.trace.back();
    if (best_restart < 0 || obj < best_objective) {
      best = std::move(run);
      best_objective = obj;
      best_restart = r;
    }
  }

  Clustering out;
  out.k = k;
  out.seed = seed;
  out.objective = best_objective;
  out.iterations_run = best.iterations;
  out.converged = best.converged;
  out.restart = best_restart;
  out.objective_trace = std::move(best.trace);
  out.assignments.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) out.assignments.emplace_back(docs[i], best.assignment[i]);
  for (const auto& c : best.centroids) {
    SparseVector sv;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] != 0.0) sv.emplace_back(std::string(terms[j]), c[j]);
    }
    out.centroids.push_back(std::move(sv));
  }
  out.heads.assign(static_cast<std::size_t>(k), std::nullopt);
  std::vector<double> head_sim(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto c = static_cast<std::size_t>(best.assignment[i]);
    const double sim = vecs[i].zero ? 0.0 : dot(vecs[i], best.centroids[c]);
    // docs ascend, so a strict margin keeps the lowest doc id on ties;
    // the margin absorbs rounding between members equidistant from the centroid
    if (!out.heads[c] || sim > head_sim[c] + kSimilarityEps) {
      out.heads[c] = docs[i];
      head_sim[c] = sim;
    }
  }
  return out;
}

std::vector<DocId> cluster_heads(const Clustering& c) {
  std::vector<DocId> out;
  for (const auto& h : c.heads) {
    if (h) out.push_back(*h);
  }
  return out;
}

std::vector<DocId> members(const Clustering& c, int cluster_index) {
  if (cluster_index < 0 || cluster_index >= c.k) {
    fail(ErrorCode::IndexOutOfRange, "cluster index " + std::to_string(cluster_index) + " outside [0, " +
                                         std::to_string(c.k) + ")");
  }
  std::vector<DocId> out;
  for (const auto& [doc, idx] : c.assignments) {
    if (idx == cluster_index) out.push_back(doc);
  }
  return out;
}

}  // namespace mailscope
