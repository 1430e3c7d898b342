#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pairlabel/types.hpp"

namespace pairlabel {

/// Sweep schedule for one Gibbs chain. A run performs
/// burn_in + samples * thinning full sweeps in fixed ascending site order
/// and retains every thinning-th sweep after burn-in.
struct GibbsConfig {
  long long burn_in = 100;
  long long samples = 200;
  long long thinning = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Sparse symmetric index over the pair sources: for every sample, the
/// incident pairs as (other endpoint, source index, value).
struct PairAdjacency {
  struct Neighbor {
    int other = 0;
    int source = 0;
    int value = 0;
  };

  int n = 0;
  std::vector<std::size_t> offsets;  // n+1
  std::vector<Neighbor> neighbors;

  static PairAdjacency build(int n, const std::vector<PairSource>& sources);

  std::span<const Neighbor> row(int i) const {
    return {neighbors.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

/// Monte Carlo tallies over the retained sweeps of one chain.
/// marginal_counts[i*c + k-1] counts visits of sample i to class k;
/// phi_sums[j] accumulates sum_i phi(vote_ij, y_i) per retained sweep;
/// pair_sums[k] accumulates sum_{(i,j)} value * 1[y_i == y_j] per source.
/// Each row of marginal_counts sums to `retained`. Summaries from
/// independent chains merge by fieldwise addition.
struct SampleSummary {
  int n = 0;
  int c = 0;
  std::vector<std::int64_t> marginal_counts;  // n*c
  std::vector<std::int64_t> phi_sums;         // m
  std::vector<std::int64_t> pair_sums;        // p
  std::int64_t retained = 0;
};

/// Single-site conditional over classes for sample i given the current
/// labeling of everything else:
///   softmax_k( sum_j theta_j*phi(vote_ij, k)
///              + sum_{(o,s,v) incident} eta_s * v * 1[k == y_o] ).
std::vector<double> conditional_y_distribution(int i, const Labeling& current,
                                               const LabelMatrix& votes,
                                               const PairAdjacency& adj,
                                               const ModelParams& params);

/// Gibbs over Y with the votes clamped at their observed values.
/// Initialization: per-sample plurality of the non-abstain votes, random
/// among ties, random over all classes when every vote abstains.
/// Identical (seed, inputs) produce bit-identical summaries.
SampleSummary run_clamped_chain(const LabelMatrix& votes,
                                const std::vector<PairSource>& pairs,
                                const ModelParams& params,
                                const GibbsConfig& cfg);

/// Gibbs over (votes, Y) jointly: each sweep resamples every vote site
/// from its exact categorical conditional (enumerating all c+1 values),
/// then every label site. Summaries accumulate the same statistics as the
/// clamped chain, evaluated on the sampled votes.
SampleSummary run_unclamped_chain(const ProblemShape& shape,
                                  const std::vector<PairSource>& pairs,
                                  const ModelParams& params,
                                  const GibbsConfig& cfg);

}  // namespace pairlabel
