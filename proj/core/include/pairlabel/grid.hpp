#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairlabel/gibbs.hpp"
#include "pairlabel/synth.hpp"
#include "pairlabel/trainer.hpp"
#include "pairlabel/types.hpp"

namespace pairlabel {

/// A model variant: which of the generated pair sources (by name) take
/// part in training and inference. An empty list is the independent
/// (no-pairs) model.
struct GridVariant {
  std::string name;
  std::vector<std::string> sources;
};

/// Declarative sweep over LF precision x pair accuracy x pair count, with
/// `repetitions` fresh datasets per cell and one row per (cell, repetition,
/// variant). Cell seeds derive from base_seed only, so results do not
/// depend on the worker count or on which other cells run.
struct ExperimentGrid {
  int n = 1000;
  int c = 10;
  int lfs_per_class = 2;
  double lf_recall = 0.5;
  double lf_jitter_sd = 0.05;
  PairKind pair_kind = PairKind::same_only;
  std::string pair_source_name = "pairs";

  std::vector<double> lf_precision_axis = {0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> pair_accuracy_axis = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<long long> pair_count_axis = {5000};

  int repetitions = 10;
  std::uint64_t base_seed = 0;
  std::vector<GridVariant> variants = {{"no-pairs", {}}, {"with-pairs", {"pairs"}}};

  TrainConfig train;
  GibbsConfig infer_gibbs{500, 2000, 1, 0};
  int workers = 1;

  void validate() const;
};

struct ResultRow {
  double lf_precision = 0.0;
  double pair_accuracy = 0.0;
  long long pair_count = 0;
  int repetition = 0;
  std::string variant;
  double map_accuracy = 0.0;
  double majority_accuracy = 0.0;
  double mean_theta = 0.0;
  double mean_eta = 0.0;
  double wall_time_s = 0.0;  // measured; excluded from the CSV serialization
  std::string error;         // nonempty marks a failed cell
};

using ResultTable = std::vector<ResultRow>;

/// The seed a given cell/repetition derives from base_seed. Exposed so a
/// cell can be reproduced in isolation.
std::uint64_t grid_cell_seed(std::uint64_t base_seed, std::size_t precision_idx,
                             std::size_t accuracy_idx, std::size_t count_idx,
                             int repetition);

/// Runs every cell x repetition x variant. Cell failures are recorded in
/// their rows (error marker, NaN metrics) and the grid continues. Rows come
/// back in deterministic axis order regardless of worker scheduling.
ResultTable run_grid(const ExperimentGrid& grid);

struct SummaryRow {
  double lf_precision = 0.0;
  double pair_accuracy = 0.0;
  long long pair_count = 0;
  std::string variant;
  int repetitions = 0;
  double mean_accuracy = 0.0;
  double sd_accuracy = 0.0;        // sample sd (N-1); 0 when N == 1
  double delta_vs_baseline = 0.0;  // mean minus the baseline variant's mean
};

/// Per (cell, variant) mean and standard deviation of MAP accuracy, plus
/// the per-cell accuracy delta against the baseline variant (the variant
/// named "no-pairs" when present, the first variant otherwise). Rows with
/// an error marker are excluded from the statistics.
std::vector<SummaryRow> summarize(const ResultTable& table);

}  // namespace pairlabel
