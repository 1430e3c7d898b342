#pragma once

#include <vector>

#include "pairlabel/gibbs.hpp"
#include "pairlabel/types.hpp"

namespace pairlabel {

/// Posterior marginals from clamped-chain visit frequencies, plus MAP
/// labels: per row the smallest class index whose visit count lies within
/// 4*sqrt(retained) of the maximum. The band is the sampling resolution of
/// the frequency estimator, so classes the chain cannot distinguish resolve
/// deterministically (a uniform posterior maps to class 1) while any
/// separation beyond noise picks the true argmax.
PosteriorEstimate infer_posterior(const LabelMatrix& votes,
                                  const std::vector<PairSource>& pairs,
                                  const ModelParams& params,
                                  const GibbsConfig& cfg);

/// Per-sample modal non-abstain vote. Ties break toward the smallest
/// class index; a sample every function abstained on falls back to class 1.
std::vector<int> majority_vote(const LabelMatrix& votes);

/// Fraction of exact matches. Throws std::invalid_argument on length
/// mismatch or empty inputs.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace pairlabel
