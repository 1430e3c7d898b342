#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pairlabel/grid.hpp"
#include "pairlabel/synth.hpp"
#include "pairlabel/textpairs.hpp"
#include "pairlabel/types.hpp"

namespace pairlabel {

/// All readers throw std::runtime_error naming the file, line and problem.
/// All writers emit byte-stable output: doubles are printed with
/// format_double and iteration orders are deterministic.

/// Shortest-faithful decimal with up to 17 significant digits.
std::string format_double(double v);

// --- votes: CSV, header lf_1,...,lf_m, one row per sample -----------------
void write_label_matrix_csv(const std::string& path, const LabelMatrix& votes);
LabelMatrix read_label_matrix_csv(const std::string& path, int c);

// --- labels: CSV, header `label`, entries in {1..c} ------------------------
void write_labeling_csv(const std::string& path, const Labeling& labels);
Labeling read_labeling_csv(const std::string& path, int c);

// --- pair source: CSV, header i,j,value; 0-based, i < j enforced ----------
void write_pair_source_csv(const std::string& path, const PairSource& src);
PairSource read_pair_source_csv(const std::string& path, int n,
                                const std::string& name);

// --- posterior: CSV, header sample_id,p_class_1..p_class_c,map_label ------
void write_posterior_csv(const std::string& path, const PosteriorEstimate& post);
PosteriorEstimate read_posterior_csv(const std::string& path);

// --- params: flat key-value text, theta_1..theta_m then eta_1..eta_p ------
void write_params(const std::string& path, const ModelParams& params);
ModelParams read_params(const std::string& path);

// --- synthetic dataset directory -------------------------------------------
// truth.csv, votes.csv, pairs_<name>.csv per source, stats.json with the
// shape, specs and realized statistics.
void save_dataset(const std::string& dir, const SyntheticDataset& ds);

struct LoadedDataset {
  int c = 0;
  Labeling truth;
  LabelMatrix votes;
  std::vector<PairSource> pair_sources;
};
LoadedDataset load_dataset(const std::string& dir);

// --- corpus -----------------------------------------------------------------
// A directory of plain-text files (docs ordered by filename) or one CSV
// with header doc_id,text (RFC-4180 quoting, ids dense from 0).
Corpus load_corpus(const std::string& path);

// --- grid results ------------------------------------------------------------
// Wall times are measured in-process but not serialized, keeping repeated
// runs byte-identical.
void write_result_csv(const std::string& path, const ResultTable& table);
ResultTable read_result_csv(const std::string& path);
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);

// --- JSON run configuration ---------------------------------------------------
// One config file per run; subcommands read their own section. Missing keys
// fall back to the built-in defaults documented in the headers.
struct SimulateSpec {
  int n = 100;
  int c = 2;
  std::vector<LfSpec> lfs;
  std::vector<PairSpec> pairs;
  std::uint64_t seed = 0;
};

int load_class_count(const std::string& path);             // top-level "c"
SimulateSpec load_simulate_config(const std::string& path);  // "simulate"
TrainConfig load_train_config(const std::string& path);      // "train"
GibbsConfig load_infer_gibbs_config(const std::string& path);  // "infer.gibbs"
ExperimentGrid load_grid_config(const std::string& path);      // "grid"

}  // namespace pairlabel
