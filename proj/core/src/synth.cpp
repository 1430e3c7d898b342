#include "pairlabel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>

#include "pairlabel/rng.hpp"

namespace pairlabel {

namespace {

double truncated_normal(Rng& rng, double mean, double sd) {
  if (sd == 0.0) return mean;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double v = rng.normal(mean, sd);
    if (v > 0.01 && v <= 1.0) return v;
  }
  throw std::runtime_error("truncated_normal: rejection failed for mean " +
                           std::to_string(mean) + ", sd " + std::to_string(sd));
}

// First k elements of a seeded partial Fisher-Yates shuffle of `pool`.
std::vector<int> sample_without_replacement(std::vector<int> pool,
                                            std::size_t k, Rng& rng) {
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t pick = t + rng.uniform_below(pool.size() - t);
    std::swap(pool[t], pool[pick]);
  }
  pool.resize(k);
  return pool;
}

// Floyd's algorithm: k distinct values drawn uniformly from [0, space).
std::vector<long long> sample_distinct(long long space, long long k, Rng& rng) {
  std::unordered_set<long long> seen;
  seen.reserve(static_cast<std::size_t>(k) * 2);
  std::vector<long long> out;
  out.reserve(static_cast<std::size_t>(k));
  for (long long j = space - k; j < space; ++j) {
    const long long t =
        static_cast<long long>(rng.uniform_below(static_cast<std::uint64_t>(j) + 1));
    if (seen.insert(t).second) {
      out.push_back(t);
    } else {
      seen.insert(j);
      out.push_back(j);
    }
  }
  return out;
}

long long pairs_in(long long sz) { return sz * (sz - 1) / 2; }

// Rank -> (a, b) with a < b < sz, ranks ordered row-major:
// (0,1), (0,2), ..., (0,sz-1), (1,2), ...
std::pair<int, int> unrank_pair(long long rank, long long sz) {
  auto before_row = [sz](long long a) { return a * (2 * sz - a - 1) / 2; };
  long long a = static_cast<long long>(
      sz - 0.5 - std::sqrt((sz - 0.5) * (sz - 0.5) - 2.0 * static_cast<double>(rank)));
  if (a < 0) a = 0;
  while (a + 1 < sz && before_row(a + 1) <= rank) ++a;
  while (a > 0 && before_row(a) > rank) --a;
  const long long b = a + 1 + (rank - before_row(a));
  return {static_cast<int>(a), static_cast<int>(b)};
}

std::vector<std::vector<int>> members_by_class(const Labeling& truth, int c) {
  std::vector<std::vector<int>> groups(c);
  for (int i = 0; i < truth.n(); ++i) groups[truth.y[i] - 1].push_back(i);
  return groups;
}

void sort_entries(PairSource& src) {
  std::sort(src.entries.begin(), src.entries.end(),
            [](const PairEntry& a, const PairEntry& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
}

void check_pair_spec(const PairSpec& spec) {
  if (spec.count < 1)
    throw std::invalid_argument("PairSpec '" + spec.name +
                                "': count must be >= 1");
  if (spec.accuracy < 0.0 || spec.accuracy > 1.0)
    throw std::invalid_argument("PairSpec '" + spec.name +
                                "': accuracy must be in [0,1]");
}

}  // namespace

long long round_half_even(double x) {
  const double f = std::floor(x);
  const double diff = x - f;
  if (diff > 0.5) return static_cast<long long>(f) + 1;
  if (diff < 0.5) return static_cast<long long>(f);
  const long long lf = static_cast<long long>(f);
  return lf % 2 == 0 ? lf : lf + 1;
}

Labeling generate_truth(int n, int c, std::uint64_t seed) {
  if (c < 2) throw std::invalid_argument("generate_truth: c must be >= 2");
  if (n < c)
    throw std::invalid_argument("generate_truth: n must be >= c, got n=" +
                                std::to_string(n) + ", c=" + std::to_string(c));
  Labeling truth;
  truth.y.reserve(n);
  const int base = n / c;
  const int extra = n % c;
  for (int k = 1; k <= c; ++k) {
    const int sz = base + (k <= extra ? 1 : 0);
    truth.y.insert(truth.y.end(), sz, k);
  }
  Rng rng(seed);
  for (std::size_t t = 0; t + 1 < truth.y.size(); ++t) {
    const std::size_t pick = t + rng.uniform_below(truth.y.size() - t);
    std::swap(truth.y[t], truth.y[pick]);
  }
  return truth;
}

std::pair<std::vector<int>, LfRealized> generate_lf(const Labeling& truth,
                                                    int c, const LfSpec& spec,
                                                    std::uint64_t seed) {
  truth.validate(c);
  if (spec.target_class < 1 || spec.target_class > c)
    throw std::invalid_argument("LfSpec: target class " +
                                std::to_string(spec.target_class) +
                                " outside {1.." + std::to_string(c) + "}");
  if (spec.target_precision <= 0.0 || spec.target_precision > 1.0 ||
      spec.target_recall <= 0.0 || spec.target_recall > 1.0)
    throw std::invalid_argument("LfSpec: precision and recall must be in (0,1]");
  if (spec.jitter_sd < 0.0)
    throw std::invalid_argument("LfSpec: jitter_sd must be >= 0");

  Rng rng(seed);
  const double recall = truncated_normal(rng, spec.target_recall, spec.jitter_sd);
  const double precision =
      truncated_normal(rng, spec.target_precision, spec.jitter_sd);

  std::vector<int> members, others;
  for (int i = 0; i < truth.n(); ++i)
    (truth.y[i] == spec.target_class ? members : others).push_back(i);
  if (members.empty())
    throw std::runtime_error("generate_lf: class " +
                             std::to_string(spec.target_class) +
                             " has no members");

  const long long tp = round_half_even(recall * static_cast<double>(members.size()));
  const long long fp =
      tp == 0 ? 0 : round_half_even(tp * (1.0 - precision) / precision);
  if (fp > static_cast<long long>(others.size()))
    throw std::runtime_error(
        "generate_lf: infeasible spec (class " + std::to_string(spec.target_class) +
        ", precision " + std::to_string(spec.target_precision) + ", recall " +
        std::to_string(spec.target_recall) + "): needs " + std::to_string(fp) +
        " false positives but only " + std::to_string(others.size()) +
        " off-class samples exist");

  std::vector<int> column(truth.n(), 0);
  for (int i : sample_without_replacement(members, static_cast<std::size_t>(tp), rng))
    column[i] = spec.target_class;
  for (int i : sample_without_replacement(others, static_cast<std::size_t>(fp), rng))
    column[i] = spec.target_class;

  LfRealized realized;
  realized.tp = tp;
  realized.fp = fp;
  realized.recall = static_cast<double>(tp) / static_cast<double>(members.size());
  realized.precision =
      tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
  realized.drawn_recall = recall;
  realized.drawn_precision = precision;
  return {std::move(column), realized};
}

PairSource generate_same_pairs(const Labeling& truth, const PairSpec& spec,
                               std::uint64_t seed) {
  check_pair_spec(spec);
  const int n = truth.n();
  if (n < 2)
    throw std::runtime_error("generate_same_pairs '" + spec.name +
                             "': need at least 2 samples");
  const auto groups = members_by_class(truth, *std::max_element(truth.y.begin(),
                                                                truth.y.end()));
  std::vector<long long> offsets{0};
  for (const auto& g : groups)
    offsets.push_back(offsets.back() + pairs_in(static_cast<long long>(g.size())));
  const long long total_same = offsets.back();
  const long long total_all = pairs_in(n);
  const long long total_cross = total_all - total_same;

  const long long same_count = round_half_even(spec.accuracy * spec.count);
  const long long cross_count = spec.count - same_count;
  if (same_count > total_same || cross_count > total_cross)
    throw std::runtime_error(
        "generate_same_pairs '" + spec.name + "': infeasible counts (" +
        std::to_string(same_count) + " same-class of " + std::to_string(total_same) +
        " available, " + std::to_string(cross_count) + " cross-class of " +
        std::to_string(total_cross) + ")");

  Rng rng(seed);
  PairSource src;
  src.n = n;
  src.name = spec.name;
  src.entries.reserve(static_cast<std::size_t>(spec.count));

  // Same-class pairs: uniform over the union of within-class triangles.
  for (long long rank : sample_distinct(total_same, same_count, rng)) {
    const std::size_t cls =
        std::upper_bound(offsets.begin(), offsets.end(), rank) - offsets.begin() - 1;
    const auto [a, b] = unrank_pair(rank - offsets[cls],
                                    static_cast<long long>(groups[cls].size()));
    int i = groups[cls][a], j = groups[cls][b];
    if (i > j) std::swap(i, j);
    src.entries.push_back(PairEntry{i, j, +1});
  }

  // Cross-class pairs: rejection over the full triangle while the demand is
  // sparse, explicit enumeration otherwise.
  if (cross_count > 0) {
    std::unordered_set<long long> used;
    used.reserve(static_cast<std::size_t>(cross_count) * 2);
    if (cross_count <= total_cross / 2 + 1) {
      long long made = 0;
      while (made < cross_count) {
        const long long rank =
            static_cast<long long>(rng.uniform_below(static_cast<std::uint64_t>(total_all)));
        const auto [i, j] = unrank_pair(rank, n);
        if (truth.y[i] == truth.y[j]) continue;
        if (!used.insert(rank).second) continue;
        src.entries.push_back(PairEntry{i, j, +1});
        ++made;
      }
    } else {
      std::vector<long long> cross;
      cross.reserve(static_cast<std::size_t>(total_cross));
      for (long long rank = 0; rank < total_all; ++rank) {
        const auto [i, j] = unrank_pair(rank, n);
        if (truth.y[i] != truth.y[j]) cross.push_back(rank);
      }
      for (long long t = 0; t < cross_count; ++t) {
        const long long pick =
            t + static_cast<long long>(rng.uniform_below(
                    static_cast<std::uint64_t>(cross.size() - t)));
        std::swap(cross[t], cross[pick]);
        const auto [i, j] = unrank_pair(cross[t], n);
        src.entries.push_back(PairEntry{i, j, +1});
      }
    }
  }

  sort_entries(src);
  src.validate();
  return src;
}

PairSource generate_mixed_pairs(const Labeling& truth, const PairSpec& spec,
                                std::uint64_t seed) {
  check_pair_spec(spec);
  const int n = truth.n();
  if (n < 2)
    throw std::runtime_error("generate_mixed_pairs '" + spec.name +
                             "': need at least 2 samples");
  const long long total_all = pairs_in(n);
  if (spec.count > total_all)
    throw std::runtime_error("generate_mixed_pairs '" + spec.name +
                             "': count " + std::to_string(spec.count) +
                             " exceeds the " + std::to_string(total_all) +
                             " available pairs");

  Rng rng(seed);
  PairSource src;
  src.n = n;
  src.name = spec.name;
  src.entries.reserve(static_cast<std::size_t>(spec.count));
  for (long long rank : sample_distinct(total_all, spec.count, rng)) {
    const auto [i, j] = unrank_pair(rank, n);
    src.entries.push_back(PairEntry{i, j, truth.y[i] == truth.y[j] ? +1 : -1});
  }
  sort_entries(src);

  const long long flips = round_half_even((1.0 - spec.accuracy) * spec.count);
  std::vector<int> idx(static_cast<std::size_t>(spec.count));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i : sample_without_replacement(std::move(idx),
                                          static_cast<std::size_t>(flips), rng))
    src.entries[i].value = -src.entries[i].value;

  src.validate();
  return src;
}

SyntheticDataset generate_dataset(int n, int c,
                                  const std::vector<LfSpec>& lf_specs,
                                  const std::vector<PairSpec>& pair_specs,
                                  std::uint64_t seed) {
  if (lf_specs.empty())
    throw std::invalid_argument("generate_dataset: need at least one LfSpec");

  SyntheticDataset ds;
  ds.seed = seed;
  ds.lf_specs = lf_specs;
  ds.truth = generate_truth(n, c, derive_seed(seed, {0}));

  const int m = static_cast<int>(lf_specs.size());
  ds.votes = LabelMatrix(n, m, c);
  for (int j = 0; j < m; ++j) {
    auto [column, realized] =
        generate_lf(ds.truth, c, lf_specs[j], derive_seed(seed, {1, static_cast<std::uint64_t>(j)}));
    for (int i = 0; i < n; ++i) ds.votes.vote(i, j) = column[i];
    ds.lf_realized.push_back(realized);
  }

  for (std::size_t k = 0; k < pair_specs.size(); ++k) {
    const std::uint64_t s = derive_seed(seed, {2, static_cast<std::uint64_t>(k)});
    PairSource src = pair_specs[k].kind == PairKind::same_only
                         ? generate_same_pairs(ds.truth, pair_specs[k], s)
                         : generate_mixed_pairs(ds.truth, pair_specs[k], s);
    long long correct = 0;
    for (const PairEntry& e : src.entries) {
      const bool same = ds.truth.y[e.i] == ds.truth.y[e.j];
      if ((same && e.value == 1) || (!same && e.value == -1)) ++correct;
    }
    ds.pair_realized.push_back(PairRealized{
        src.name,
        static_cast<double>(correct) / static_cast<double>(src.entries.size()),
        correct});
    ds.pair_sources.push_back(std::move(src));
  }
  return ds;
}

std::vector<SyntheticDataset> generate_paper_suite(const PaperSuiteConfig& cfg,
                                                   std::uint64_t seed) {
  std::vector<SyntheticDataset> out;
  out.reserve(cfg.precision_grid.size() * cfg.pair_accuracy_grid.size() *
              cfg.pair_count_grid.size() * cfg.repetitions);
  for (std::size_t ci = 0; ci < cfg.pair_count_grid.size(); ++ci) {
    for (std::size_t pi = 0; pi < cfg.precision_grid.size(); ++pi) {
      for (std::size_t ai = 0; ai < cfg.pair_accuracy_grid.size(); ++ai) {
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
          std::vector<LfSpec> lfs;
          for (int k = 1; k <= cfg.c; ++k)
            for (int d = 0; d < cfg.lfs_per_class; ++d)
              lfs.push_back(LfSpec{k, cfg.precision_grid[pi], cfg.recall,
                                   cfg.jitter_sd});
          PairSpec ps;
          ps.name = "pairs";
          ps.count = cfg.pair_count_grid[ci];
          ps.accuracy = cfg.pair_accuracy_grid[ai];
          ps.kind = cfg.kind;
          const std::uint64_t cell_seed =
              derive_seed(seed, {ci, pi, ai, static_cast<std::uint64_t>(rep)});
          out.push_back(generate_dataset(cfg.n, cfg.c, lfs, {ps}, cell_seed));
        }
      }
    }
  }
  return out;
}

}  // namespace pairlabel
