#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pairlabel/gibbs.hpp"
#include "pairlabel/types.hpp"

namespace pairlabel {

/// Gradient-descent knobs. The inner GibbsConfig's own seed is ignored by
/// fit(); per-step chain seeds derive from (seed, step index) via the
/// splittable counter scheme in rng.hpp. The default step size suits
/// desk-toy instances; gradients scale with n, so pick step_size on the
/// order of 1/n for larger datasets.
struct TrainConfig {
  int steps = 100;
  double step_size = 0.05;
  double l2 = 0.0;
  GibbsConfig gibbs{100, 200, 1, 0};
  double init_theta = 0.5;
  double init_eta = 0.5;
  std::uint64_t seed = 0;
  // Swap in exact_nll_and_gradient instead of the sampled estimate.
  // Only valid on instances small enough for the enumeration guard.
  bool exact_gradient = false;

  void validate() const;
};

/// One record per executed gradient step. The chain diagnostics are
/// per-site means from the sampled path; NaN when exact_gradient is set.
struct TrainStepRecord {
  int step = 0;
  ModelParams params;
  double grad_norm = 0.0;
  double clamped_phi_mean = 0.0;
  double unclamped_phi_mean = 0.0;
  double clamped_pair_mean = 0.0;
  double unclamped_pair_mean = 0.0;
};

struct TrainTrace {
  std::vector<TrainStepRecord> records;
};

/// Sampled likelihood gradient: one clamped and one unclamped chain share
/// the given schedule (their seeds derive from gibbs.seed), and
///   grad_theta[j] = (unclamped phi_sums[j] - clamped phi_sums[j]) / retained
///   grad_eta[k]   = (unclamped pair_sums[k] - clamped pair_sums[k]) / retained.
/// Descending this direction reduces the negative log marginal likelihood.
std::vector<double> estimate_gradient(const LabelMatrix& votes,
                                      const std::vector<PairSource>& pairs,
                                      const ModelParams& params,
                                      const GibbsConfig& gibbs);

/// Full-batch gradient descent from (init_theta, init_eta):
///   params <- params - step_size * (gradient + l2 * params).
/// Deterministic under a fixed seed. Throws std::runtime_error naming the
/// step if a parameter goes non-finite.
std::pair<ModelParams, TrainTrace> fit(const LabelMatrix& votes,
                                       const std::vector<PairSource>& pairs,
                                       const TrainConfig& cfg);

}  // namespace pairlabel
