#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mailscope/query.hpp"
#include "mailscope/textindex.hpp"

namespace mailscope {

struct ClusterOptions {
  int restarts = 10;
  int max_iterations = 100;
};

struct Clustering {
  int k = 0;
  std::uint64_t seed = 0;
  // Ascending by doc id; cluster index in [0, k).
  std::vector<std::pair<DocId, int>> assignments;
  // Unit-length (or all-zero) centroid per cluster, sparse by term.
  std::vector<SparseVector> centroids;
  // Medoid by cosine to the centroid; empty for empty clusters.
  std::vector<std::optional<DocId>> heads;
  // Sum over docs of 1 - cos(doc, centroid of its cluster).
  double objective = 0.0;
  int iterations_run = 0;
  bool converged = false;
  int restart = 0;
  // Objective after every centroid update of the winning restart.
  std::vector<double> objective_trace;

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

// Spherical k-means over unit-normalized TF-IDF doc vectors with seeded
// k-means++ initialisation and `restarts` independent runs; the run with the
// lowest objective wins (earliest restart on ties). Docs whose vector is
// all-zero are parked in cluster 0. Throws Error(EmptyResults) or
// Error(InvalidK).
Clustering clusterize(std::span<const DocId> docs, const CorpusIndex& index, int k, std::uint64_t seed,
                      const ClusterOptions& options = {});

// Heads of the non-empty clusters, in cluster order.
std::vector<DocId> cluster_heads(const Clustering& c);

// Ascending doc ids. Throws Error(IndexOutOfRange).
std::vector<DocId> members(const Clustering& c, int cluster_index);

// Cosine similarity of two sparse vectors sorted by term.
double cosine(const SparseVector& x, const SparseVector& y);

}  // namespace mailscope
