#include "pairlabel/grid.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "pairlabel/posterior.hpp"
#include "pairlabel/rng.hpp"

namespace pairlabel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

}  // namespace

void ExperimentGrid::validate() const {
  if (lf_precision_axis.empty() || pair_accuracy_axis.empty() ||
      pair_count_axis.empty())
    throw std::invalid_argument("ExperimentGrid: axes must be nonempty");
  if (repetitions < 1)
    throw std::invalid_argument("ExperimentGrid: repetitions must be >= 1");
  if (variants.empty())
    throw std::invalid_argument("ExperimentGrid: need at least one variant");
  if (workers < 1)
    throw std::invalid_argument("ExperimentGrid: workers must be >= 1");
  train.validate();
  infer_gibbs.validate();
}

std::uint64_t grid_cell_seed(std::uint64_t base_seed, std::size_t precision_idx,
                             std::size_t accuracy_idx, std::size_t count_idx,
                             int repetition) {
  return derive_seed(base_seed, {precision_idx, accuracy_idx, count_idx,
                                 static_cast<std::uint64_t>(repetition)});
}

ResultTable run_grid(const ExperimentGrid& grid) {
  grid.validate();

  struct Job {
    std::size_t pi, ai, ci;
    int rep;
    std::size_t row_base;  // first row index for this job's variants
  };
  std::vector<Job> jobs;
  const std::size_t variants = grid.variants.size();
  std::size_t row_base = 0;
  for (std::size_t pi = 0; pi < grid.lf_precision_axis.size(); ++pi)
    for (std::size_t ai = 0; ai < grid.pair_accuracy_axis.size(); ++ai)
      for (std::size_t ci = 0; ci < grid.pair_count_axis.size(); ++ci)
        for (int rep = 0; rep < grid.repetitions; ++rep) {
          jobs.push_back(Job{pi, ai, ci, rep, row_base});
          row_base += variants;
        }

  ResultTable table(row_base);

  auto run_job = [&](const Job& job) {
    const double precision = grid.lf_precision_axis[job.pi];
    const double pair_accuracy = grid.pair_accuracy_axis[job.ai];
    const long long pair_count = grid.pair_count_axis[job.ci];
    const std::uint64_t cell_seed =
        grid_cell_seed(grid.base_seed, job.pi, job.ai, job.ci, job.rep);

    for (std::size_t v = 0; v < variants; ++v) {
      ResultRow& row = table[job.row_base + v];
      row.lf_precision = precision;
      row.pair_accuracy = pair_accuracy;
      row.pair_count = pair_count;
      row.repetition = job.rep;
      row.variant = grid.variants[v].name;
      row.map_accuracy = row.majority_accuracy = kNaN;
      row.mean_theta = row.mean_eta = kNaN;
    }

    try {
      std::vector<LfSpec> lfs;
      for (int k = 1; k <= grid.c; ++k)
        for (int d = 0; d < grid.lfs_per_class; ++d)
          lfs.push_back(LfSpec{k, precision, grid.lf_recall, grid.lf_jitter_sd});
      PairSpec ps;
      ps.name = grid.pair_source_name;
      ps.count = pair_count;
      ps.accuracy = pair_accuracy;
      ps.kind = grid.pair_kind;

      const SyntheticDataset ds = generate_dataset(
          grid.n, grid.c, lfs, {ps}, derive_seed(cell_seed, {0}));
      const double mv_acc = accuracy(majority_vote(ds.votes), ds.truth.y);

      for (std::size_t v = 0; v < variants; ++v) {
        ResultRow& row = table[job.row_base + v];
        const auto t0 = std::chrono::steady_clock::now();
        try {
          std::vector<PairSource> selected;
          for (const std::string& want : grid.variants[v].sources) {
            bool found = false;
            for (const PairSource& src : ds.pair_sources)
              if (src.name == want) {
                selected.push_back(src);
                found = true;
                break;
              }
            if (!found)
              throw std::runtime_error("variant '" + grid.variants[v].name +
                                       "' references unknown pair source '" +
                                       want + "'");
          }

          TrainConfig train = grid.train;
          train.seed = derive_seed(cell_seed, {1, v});
          const auto [params, trace] = fit(ds.votes, selected, train);

          GibbsConfig infer = grid.infer_gibbs;
          infer.seed = derive_seed(cell_seed, {2, v});
          const PosteriorEstimate post =
              infer_posterior(ds.votes, selected, params, infer);

          row.map_accuracy = accuracy(post.map_labels, ds.truth.y);
          row.majority_accuracy = mv_acc;
          row.mean_theta = mean_of(params.theta);
          row.mean_eta = params.eta.empty() ? kNaN : mean_of(params.eta);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        row.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
      }
    } catch (const std::exception& e) {
      for (std::size_t v = 0; v < variants; ++v)
        table[job.row_base + v].error = e.what();
    }
  };

  const int workers = std::min<int>(grid.workers, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (const Job& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t at = next.fetch_add(1);
          if (at >= jobs.size()) return;
          run_job(jobs[at]);
        }
      });
    for (std::thread& t : pool) t.join();
  }
  return table;
}

std::vector<SummaryRow> summarize(const ResultTable& table) {
  if (table.empty()) throw std::invalid_argument("summarize: empty table");

  using CellKey = std::tuple<double, double, long long>;
  struct Group {
    std::vector<double> accuracies;
    std::size_t first_row = 0;
  };
  std::map<std::pair<CellKey, std::string>, Group> groups;
  std::string baseline;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const ResultRow& row = table[r];
    if (baseline.empty()) baseline = row.variant;
    if (row.variant == "no-pairs") baseline = "no-pairs";
    auto key = std::make_pair(
        CellKey{row.lf_precision, row.pair_accuracy, row.pair_count}, row.variant);
    auto [it, fresh] = groups.emplace(std::move(key), Group{});
    if (fresh) it->second.first_row = r;
    it->second.first_row = std::min(it->second.first_row, r);
    if (row.error.empty()) it->second.accuracies.push_back(row.map_accuracy);
  }

  std::map<CellKey, double> baseline_mean;
  for (const auto& [key, grp] : groups)
    if (key.second == baseline && !grp.accuracies.empty())
      baseline_mean[key.first] = mean_of(grp.accuracies);

  // Rows ordered by first appearance in the table.
  std::vector<std::pair<std::size_t, SummaryRow>> ordered;
  for (const auto& [key, grp] : groups) {
    SummaryRow out;
    std::tie(out.lf_precision, out.pair_accuracy, out.pair_count) = key.first;
    out.variant = key.second;
    out.repetitions = static_cast<int>(grp.accuracies.size());
    if (grp.accuracies.empty()) {
      out.mean_accuracy = out.sd_accuracy = out.delta_vs_baseline = kNaN;
    } else {
      out.mean_accuracy = mean_of(grp.accuracies);
      double ss = 0.0;
      for (double a : grp.accuracies) {
        const double d = a - out.mean_accuracy;
        ss += d * d;
      }
      out.sd_accuracy = grp.accuracies.size() > 1
                            ? std::sqrt(ss / (grp.accuracies.size() - 1))
                            : 0.0;
      const auto base = baseline_mean.find(key.first);
      out.delta_vs_baseline = base != baseline_mean.end()
                                  ? out.mean_accuracy - base->second
                                  : kNaN;
    }
    ordered.emplace_back(grp.first_row, std::move(out));
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<SummaryRow> rows;
  rows.reserve(ordered.size());
  for (auto& [at, row] : ordered) rows.push_back(std::move(row));
  return rows;
}

}  // namespace pairlabel
