// pairlabel: weak-supervision label synthesis from noisy labeling
// functions and pairwise same/different-class feedback.
//
// Subcommands: simulate, train, infer, eval, pairs-mknn, pairs-keymatch,
// grid, summarize. See README.md for the config schema and file formats.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pairlabel/grid.hpp"
#include "pairlabel/io.hpp"
#include "pairlabel/posterior.hpp"
#include "pairlabel/synth.hpp"
#include "pairlabel/textpairs.hpp"
#include "pairlabel/trainer.hpp"

namespace fs = std::filesystem;
using namespace pairlabel;

namespace {

std::string source_name_from_path(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  if (stem.rfind("pairs_", 0) == 0) stem = stem.substr(6);
  return stem.empty() ? "pairs" : stem;
}

std::vector<PairSource> load_pair_files(const std::vector<std::string>& paths,
                                        int n) {
  std::vector<PairSource> sources;
  for (const std::string& p : paths)
    sources.push_back(read_pair_source_csv(p, n, source_name_from_path(p)));
  return sources;
}

void write_trace_csv(const std::string& path, const TrainTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "step,grad_norm,clamped_phi_mean,unclamped_phi_mean,"
         "clamped_pair_mean,unclamped_pair_mean\n";
  for (const TrainStepRecord& rec : trace.records)
    out << rec.step << "," << format_double(rec.grad_norm) << ","
        << format_double(rec.clamped_phi_mean) << ","
        << format_double(rec.unclamped_phi_mean) << ","
        << format_double(rec.clamped_pair_mean) << ","
        << format_double(rec.unclamped_pair_mean) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairlabel: label synthesis from labeling functions and "
               "pairwise feedback"};
  app.require_subcommand(1);

  std::string config_path, out_path, votes_path, params_path, truth_path;
  std::string pred_path, corpus_path, trace_path, results_path;
  std::string pattern = kDefaultKeyPattern;
  std::vector<std::string> pair_paths;
  std::optional<std::uint64_t> seed_flag;
  int knn_k = 10;
  double min_df = 0.001;
  int workers = 1;

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic dataset");
  simulate->add_option("--config", config_path, "run config (JSON)")->required();
  simulate->add_option("--out", out_path, "output dataset directory")->required();
  simulate->add_option("--seed", seed_flag, "override the config seed");

  auto* train = app.add_subcommand("train", "fit accuracy weights");
  train->add_option("--config", config_path, "run config (JSON)")->required();
  train->add_option("--votes", votes_path, "votes CSV")->required();
  train->add_option("--pairs", pair_paths, "pair source CSV (repeatable)");
  train->add_option("--out", out_path, "output params file")->required();
  train->add_option("--trace", trace_path, "optional trace CSV");
  train->add_option("--seed", seed_flag, "override the config seed");

  auto* infer = app.add_subcommand("infer", "posterior marginals and MAP labels");
  infer->add_option("--config", config_path, "run config (JSON)")->required();
  infer->add_option("--votes", votes_path, "votes CSV")->required();
  infer->add_option("--pairs", pair_paths, "pair source CSV (repeatable)");
  infer->add_option("--params", params_path, "fitted params file")->required();
  infer->add_option("--out", out_path, "output posterior CSV")->required();
  infer->add_option("--seed", seed_flag, "override the config seed");

  auto* eval = app.add_subcommand("eval", "score predictions against truth");
  eval->add_option("--pred", pred_path, "posterior CSV from infer")->required();
  eval->add_option("--truth", truth_path, "truth CSV")->required();
  eval->add_option("--votes", votes_path, "votes CSV for the majority-vote baseline");
  eval->add_option("--out", out_path, "optional metrics CSV (default stdout)");

  auto* mknn = app.add_subcommand("pairs-mknn",
                                  "mutual k-NN pairs from tf-idf cosine");
  mknn->add_option("--corpus", corpus_path, "corpus dir or CSV")->required();
  mknn->add_option("--k", knn_k, "neighbors per document")->default_val(10);
  mknn->add_option("--min-df", min_df, "minimum document frequency fraction")
      ->default_val(0.001);
  mknn->add_option("--out", out_path, "output pair CSV")->required();
  mknn->add_option("--truth", truth_path, "optional truth CSV for stats");

  auto* keymatch = app.add_subcommand("pairs-keymatch",
                                      "pairs of documents sharing an extracted key");
  keymatch->add_option("--corpus", corpus_path, "corpus dir or CSV")->required();
  keymatch->add_option("--pattern", pattern, "extraction regex (first match)");
  keymatch->add_option("--out", out_path, "output pair CSV")->required();
  keymatch->add_option("--truth", truth_path, "optional truth CSV for stats");

  auto* grid_cmd = app.add_subcommand("grid", "run an experiment grid");
  grid_cmd->add_option("--config", config_path, "run config (JSON)")->required();
  grid_cmd->add_option("--out", out_path, "output directory")->required();
  grid_cmd->add_option("--workers", workers, "concurrent cells")->default_val(1);
  grid_cmd->add_option("--seed", seed_flag, "override the config base seed");

  auto* summarize_cmd = app.add_subcommand("summarize", "aggregate a results CSV");
  summarize_cmd->add_option("--results", results_path, "results CSV from grid")
      ->required();
  summarize_cmd->add_option("--out", out_path, "output summary CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      SimulateSpec spec = load_simulate_config(config_path);
      if (seed_flag) spec.seed = *seed_flag;
      const SyntheticDataset ds =
          generate_dataset(spec.n, spec.c, spec.lfs, spec.pairs, spec.seed);
      save_dataset(out_path, ds);
    } else if (*train) {
      const int c = load_class_count(config_path);
      TrainConfig cfg = load_train_config(config_path);
      if (seed_flag) cfg.seed = *seed_flag;
      const LabelMatrix votes = read_label_matrix_csv(votes_path, c);
      const auto sources = load_pair_files(pair_paths, votes.n);
      const auto [params, trace] = fit(votes, sources, cfg);
      write_params(out_path, params);
      if (!trace_path.empty()) write_trace_csv(trace_path, trace);
    } else if (*infer) {
      const int c = load_class_count(config_path);
      GibbsConfig cfg = load_infer_gibbs_config(config_path);
      if (seed_flag) cfg.seed = *seed_flag;
      const LabelMatrix votes = read_label_matrix_csv(votes_path, c);
      const auto sources = load_pair_files(pair_paths, votes.n);
      const ModelParams params = read_params(params_path);
      write_posterior_csv(out_path, infer_posterior(votes, sources, params, cfg));
    } else if (*eval) {
      const PosteriorEstimate post = read_posterior_csv(pred_path);
      const Labeling truth = read_labeling_csv(truth_path, post.c);
      std::string lines = "metric,value\n";
      lines += "map_accuracy," +
               format_double(accuracy(post.map_labels, truth.y)) + "\n";
      if (!votes_path.empty()) {
        const LabelMatrix votes = read_label_matrix_csv(votes_path, post.c);
        lines += "majority_accuracy," +
                 format_double(accuracy(majority_vote(votes), truth.y)) + "\n";
      }
      if (out_path.empty()) {
        std::cout << lines;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
        out << lines;
      }
    } else if (*mknn) {
      const Corpus corpus = load_corpus(corpus_path);
      const SparseVectors vectors = build_tfidf(corpus, min_df);
      const KnnGraph graph = build_knn(vectors, knn_k);
      const PairSource src = mknn_pairs(graph);
      write_pair_source_csv(out_path, src);
      if (!truth_path.empty()) {
        const Labeling truth = read_labeling_csv(truth_path, 1 << 20);
        const PairStats stats = pair_stats(src, truth);
        std::cout << "unique_pairs," << stats.unique_pairs << "\n"
                  << "pair_accuracy," << format_double(stats.accuracy) << "\n";
      }
    } else if (*keymatch) {
      Corpus corpus = load_corpus(corpus_path);
      PairSource src = keymatch_pairs(corpus, pattern);
      src.n = corpus.n();
      write_pair_source_csv(out_path, src);
      if (!truth_path.empty()) {
        const Labeling truth = read_labeling_csv(truth_path, 1 << 20);
        const PairStats stats = pair_stats(src, truth);
        std::cout << "unique_pairs," << stats.unique_pairs << "\n"
                  << "pair_accuracy," << format_double(stats.accuracy) << "\n";
      }
    } else if (*grid_cmd) {
      ExperimentGrid grid = load_grid_config(config_path);
      if (seed_flag) grid.base_seed = *seed_flag;
      if (grid_cmd->count("--workers")) grid.workers = workers;
      fs::create_directories(out_path);
      const ResultTable table = run_grid(grid);
      write_result_csv((fs::path(out_path) / "results.csv").string(), table);
      write_summary_csv((fs::path(out_path) / "summary.csv").string(),
                        summarize(table));
      double total_wall = 0.0;
      for (const ResultRow& row : table) total_wall += row.wall_time_s;
      std::cerr << "grid: " << table.size() << " rows, total fit+infer time "
                << format_double(total_wall) << " s\n";
    } else if (*summarize_cmd) {
      write_summary_csv(out_path, summarize(read_result_csv(results_path)));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
