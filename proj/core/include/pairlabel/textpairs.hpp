#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pairlabel/types.hpp"

namespace pairlabel {

/// A document collection; doc ids are dense in [0, n) and equal the index
/// into `docs`. Truth labels, when present, are for evaluation only.
struct Corpus {
  std::vector<std::string> docs;
  std::optional<Labeling> truth;

  int n() const { return static_cast<int>(docs.size()); }
};

/// L2-normalized tf-idf rows over a min-df-filtered vocabulary.
/// idf(t) = ln((1+n)/(1+df(t))) + 1 with raw term counts; a term is kept
/// when df(t) >= min_df * n. Columns are assigned in lexicographic term
/// order.
struct SparseVectors {
  std::vector<std::string> terms;              // column -> term
  std::map<std::string, int> vocabulary;       // term -> column
  std::vector<std::vector<std::pair<int, double>>> rows;  // sorted by column
  double min_df = 0.0;
};

/// Exact cosine k-nearest-neighbor lists. Per doc, sorted by descending
/// similarity with ties broken by ascending doc id; self excluded.
struct KnnGraph {
  struct Neighbor {
    int doc = 0;
    double similarity = 0.0;
  };
  int k = 0;
  std::vector<std::vector<Neighbor>> neighbors;
};

/// Lowercased alphanumeric tokens of length >= 2.
std::vector<std::string> tokenize(const std::string& text);

/// Throws std::invalid_argument on an empty corpus.
SparseVectors build_tfidf(const Corpus& corpus, double min_df);

/// Brute-force exact top-k by cosine similarity. Requires 1 <= k < n.
KnnGraph build_knn(const SparseVectors& vectors, int k);

/// Must-link pair per unordered pair of docs that appear in each other's
/// neighbor lists. Output entries are sorted by (i, j).
PairSource mknn_pairs(const KnnGraph& graph);

/// Extracts the first match of `pattern` (ECMAScript regex, case folded to
/// lowercase) per doc, groups docs by the extracted key, and emits every
/// within-group pair as a must-link. The default pattern matches an email
/// address-shaped token. Throws std::runtime_error on an invalid pattern.
inline constexpr const char* kDefaultKeyPattern =
    "[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\\.[A-Za-z]{2,}";
PairSource keymatch_pairs(const Corpus& corpus,
                          const std::string& pattern = kDefaultKeyPattern);

/// Evaluation summary of a pair source against ground truth.
/// accuracy counts +1 entries joining same-class samples and -1 entries
/// joining different-class ones; degrees[i] is the number of pairs
/// incident to sample i (the pairs-per-sample histogram data).
struct PairStats {
  long long unique_pairs = 0;
  double accuracy = 0.0;
  std::vector<long long> degrees;
};

PairStats pair_stats(const PairSource& pairs, const Labeling& truth);

}  // namespace pairlabel
