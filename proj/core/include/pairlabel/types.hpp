#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pairlabel {

/// Problem dimensions: n samples, m labeling functions, c classes,
/// p pairwise feedback sources.
struct ProblemShape {
  int n = 0;
  int m = 0;
  int c = 0;
  int p = 0;

  void validate() const;
};

/// Dense n x m matrix of labeling-function votes. Entries lie in
/// {0, 1, ..., c}; 0 means the labeling function abstained.
struct LabelMatrix {
  int n = 0;
  int m = 0;
  int c = 0;
  std::vector<int> votes;  // row-major, size n*m

  LabelMatrix() = default;
  LabelMatrix(int n_, int m_, int c_)
      : n(n_), m(m_), c(c_), votes(std::size_t(n_) * std::size_t(m_), 0) {}
  LabelMatrix(int n_, int m_, int c_, std::vector<int> votes_)
      : n(n_), m(m_), c(c_), votes(std::move(votes_)) {}

  int vote(int i, int j) const { return votes[std::size_t(i) * m + j]; }
  int& vote(int i, int j) { return votes[std::size_t(i) * m + j]; }

  void validate() const;
};

/// One pairwise assertion: samples i < j are of the same class (+1)
/// or of different classes (-1).
struct PairEntry {
  int i = 0;
  int j = 0;
  int value = 0;  // -1 or +1
};

/// A sparse symmetric source of pairwise feedback over n samples. Each
/// unordered pair is stored once with i < j; symmetry is implicit. A pair
/// the source says nothing about is simply absent (an abstain).
struct PairSource {
  int n = 0;
  std::string name;
  std::vector<PairEntry> entries;

  void validate() const;
};

/// Accuracy weights: one theta per labeling function, one eta per
/// pairwise source. Because each unordered pair is stored and summed
/// once, a literal symmetric-matrix double sum would scale eta by 2;
/// learning absorbs the constant.
struct ModelParams {
  std::vector<double> theta;
  std::vector<double> eta;

  void validate() const;
  bool all_finite() const;
};

/// An assignment of class labels, entries in {1, ..., c}.
struct Labeling {
  std::vector<int> y;

  int n() const { return static_cast<int>(y.size()); }
  void validate(int c) const;
};

/// Posterior class marginals (row-stochastic, n x c) and the derived MAP
/// labels. Ties break toward the smallest class index; sampled estimates
/// treat rows indistinguishable at the chain's resolution as tied, so a
/// MAP label tracks the row argmax up to sampling noise.
struct PosteriorEstimate {
  int n = 0;
  int c = 0;
  std::vector<double> marginals;  // row-major, size n*c
  std::vector<int> map_labels;    // size n, entries in {1..c}

  double marginal(int i, int k) const {  // k is a class in {1..c}
    return marginals[std::size_t(i) * c + (k - 1)];
  }
  void validate() const;
};

/// Checks that votes, pair sources and params agree on (n, m, c, p).
/// Throws std::invalid_argument on mismatch.
void check_consistent(const LabelMatrix& votes,
                      const std::vector<PairSource>& pairs,
                      const ModelParams& params);

ProblemShape shape_of(const LabelMatrix& votes,
                      const std::vector<PairSource>& pairs);

}  // namespace pairlabel
