#pragma once

#include <vector>

#include "pairlabel/types.hpp"

namespace pairlabel {

/// The three-case factor between a labeling-function vote and a true
/// label: +1 on agreement, 0 on abstain (vote == 0), -1 otherwise.
/// Throws std::invalid_argument when vote is outside {0..c} or y is
/// outside {1..c}.
int factor_phi(int vote, int y, int c);

/// Unnormalized log density of the joint model:
///   sum_j sum_i theta_j * phi(vote_ij, y_i)
///     + sum_k eta_k * sum_{(i,j) in source k} value_ij * 1[y_i == y_j],
/// with the pair sum running once per stored unordered pair. With p == 0
/// this is the independent model's exponent.
double log_density_unnormalized(const Labeling& labels,
                                const LabelMatrix& votes,
                                const std::vector<PairSource>& pairs,
                                const ModelParams& params);

/// Largest c^n admitted by the exact-enumeration routines below.
inline constexpr double kEnumerationGuard = 1e6;

/// Brute-force posterior over all c^n labelings. Intended as a testing
/// oracle for small instances; throws std::length_error when c^n exceeds
/// the enumeration guard.
PosteriorEstimate exact_posterior(const LabelMatrix& votes,
                                  const std::vector<PairSource>& pairs,
                                  const ModelParams& params);

struct NllAndGradient {
  double nll = 0.0;
  std::vector<double> gradient;  // m theta coordinates, then p eta ones
};

/// Exact negative log marginal likelihood of the observed votes and its
/// gradient (model expectation minus clamped expectation per coordinate).
/// The vote-side model expectation is computed analytically per site:
///   E[phi | y_i] = (e^t - (c-1) e^-t) / (e^t + (c-1) e^-t + 1),
/// which is exact because vote sites are conditionally independent given
/// the labels (the abstain state contributes weight e^0 = 1). The label
/// marginal only sees the pair factors, and is enumerated under the same
/// guard as exact_posterior.
NllAndGradient exact_nll_and_gradient(const LabelMatrix& votes,
                                      const std::vector<PairSource>& pairs,
                                      const ModelParams& params);

}  // namespace pairlabel
