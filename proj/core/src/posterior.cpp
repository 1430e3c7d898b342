#include "pairlabel/posterior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pairlabel {

PosteriorEstimate infer_posterior(const LabelMatrix& votes,
                                  const std::vector<PairSource>& pairs,
                                  const ModelParams& params,
                                  const GibbsConfig& cfg) {
  const SampleSummary sum = run_clamped_chain(votes, pairs, params, cfg);
  const int n = sum.n, c = sum.c;

  PosteriorEstimate post;
  post.n = n;
  post.c = c;
  post.marginals.resize(std::size_t(n) * c);
  post.map_labels.resize(n);
  const double retained = static_cast<double>(sum.retained);
  // Ties at the estimator's resolution resolve toward the smallest class
  // index, keeping MAP labels reproducible under uninformative posteriors:
  // a truly tied pair's count difference has sd <= sqrt(retained), so
  // counts within 4*sqrt(retained) of the maximum count as tied.
  const double tie_band = 4.0 * std::sqrt(retained);
  for (int i = 0; i < n; ++i) {
    std::int64_t top = 0;
    for (int k = 0; k < c; ++k) {
      const std::size_t at = std::size_t(i) * c + k;
      post.marginals[at] = static_cast<double>(sum.marginal_counts[at]) / retained;
      top = std::max(top, sum.marginal_counts[at]);
    }
    for (int k = 0; k < c; ++k) {
      if (static_cast<double>(sum.marginal_counts[std::size_t(i) * c + k]) +
              tie_band >=
          static_cast<double>(top)) {
        post.map_labels[i] = k + 1;
        break;
      }
    }
  }
  return post;
}

std::vector<int> majority_vote(const LabelMatrix& votes) {
  votes.validate();
  std::vector<int> out(votes.n, 1);
  std::vector<int> counts(votes.c);
  for (int i = 0; i < votes.n; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int j = 0; j < votes.m; ++j) {
      const int v = votes.vote(i, j);
      if (v != 0) ++counts[v - 1];
    }
    int best = 0;
    for (int k = 1; k < votes.c; ++k)
      if (counts[k] > counts[best]) best = k;
    out[i] = counts[best] > 0 ? best + 1 : 1;
  }
  return out;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("accuracy: length mismatch (" +
                                std::to_string(pred.size()) + " vs " +
                                std::to_string(truth.size()) + ")");
  if (pred.empty()) throw std::invalid_argument("accuracy: empty inputs");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

}  // namespace pairlabel
