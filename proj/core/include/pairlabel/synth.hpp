#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairlabel/types.hpp"

namespace pairlabel {

/// Target operating point of one simulated labeling function. Realized
/// precision/recall are drawn from normal(target, jitter_sd) truncated to
/// (0.01, 1.0]; jitter_sd == 0 reproduces the targets exactly (up to the
/// count rounding, which is round-half-to-even throughout).
struct LfSpec {
  int target_class = 1;
  double target_precision = 0.5;
  double target_recall = 0.5;
  double jitter_sd = 0.0;
};

enum class PairKind {
  same_only,           // must-link assertions only, some erroneously cross-class
  same_and_different,  // uniform pairs labeled by ground truth, then sign-flipped
};

struct PairSpec {
  std::string name = "pairs";
  long long count = 0;
  double accuracy = 1.0;
  PairKind kind = PairKind::same_only;
};

/// Realized operating point of a generated labeling function, recomputed
/// exactly from the emitted column. With tp + fp == 0 precision is 1.0 by
/// convention.
struct LfRealized {
  double precision = 1.0;
  double recall = 0.0;
  long long tp = 0;
  long long fp = 0;
  double drawn_precision = 0.0;  // post-truncation normal draws
  double drawn_recall = 0.0;
};

struct PairRealized {
  std::string name;
  double accuracy = 0.0;
  long long correct = 0;
};

struct SyntheticDataset {
  Labeling truth;
  LabelMatrix votes;
  std::vector<PairSource> pair_sources;
  std::vector<LfSpec> lf_specs;
  std::vector<LfRealized> lf_realized;
  std::vector<PairRealized> pair_realized;
  std::uint64_t seed = 0;
};

/// Balanced ground truth: class sizes differ by at most one (classes
/// 1..(n mod c) take the extra sample), order shuffled by the seed.
/// Requires n >= c.
Labeling generate_truth(int n, int c, std::uint64_t seed);

/// One labeling-function column: the function votes its target class on
/// tp = round(recall * class_size) members and fp = round(tp*(1-q)/q)
/// non-members, abstaining elsewhere. Throws std::runtime_error naming
/// the spec when the fp demand exceeds the off-class population.
std::pair<std::vector<int>, LfRealized> generate_lf(const Labeling& truth,
                                                    int c, const LfSpec& spec,
                                                    std::uint64_t seed);

/// Must-link source: exactly round(accuracy*count) distinct same-class
/// pairs and count - that many distinct cross-class pairs, all valued +1.
PairSource generate_same_pairs(const Labeling& truth, const PairSpec& spec,
                               std::uint64_t seed);

/// Mixed source: count distinct pairs drawn uniformly, valued +1/-1 by
/// ground truth, then exactly round((1-accuracy)*count) of them flipped.
PairSource generate_mixed_pairs(const Labeling& truth, const PairSpec& spec,
                                std::uint64_t seed);

/// Truth + votes + pair sources + realized stats in one shot, with
/// per-component seeds derived from `seed`.
SyntheticDataset generate_dataset(int n, int c,
                                  const std::vector<LfSpec>& lf_specs,
                                  const std::vector<PairSpec>& pair_specs,
                                  std::uint64_t seed);

/// The full synthetic sweep: labeling functions at each target precision
/// (fixed recall, two per class by default) crossed with one pair source
/// per (accuracy, count) cell, `repetitions` datasets per cell.
struct PaperSuiteConfig {
  int n = 1000;
  int c = 10;
  int lfs_per_class = 2;
  double recall = 0.5;
  double jitter_sd = 0.05;
  std::vector<double> precision_grid = {0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> pair_accuracy_grid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                            0.6, 0.7, 0.8, 0.9};
  std::vector<long long> pair_count_grid = {1000, 5000, 10000};
  PairKind kind = PairKind::same_only;
  int repetitions = 10;
};

std::vector<SyntheticDataset> generate_paper_suite(const PaperSuiteConfig& cfg,
                                                   std::uint64_t seed);

/// Round-half-to-even used everywhere a count is derived from a rate.
long long round_half_even(double x);

}  // namespace pairlabel
