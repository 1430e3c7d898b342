#include "pairlabel/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pairlabel/rng.hpp"

namespace pairlabel {

namespace {

inline int phi_of(int vote, int y) {
  return vote == 0 ? 0 : (vote == y ? 1 : -1);
}

// Sparse per-sample view of the non-abstain votes.
struct VoteEntry {
  int lf = 0;
  int v = 0;
};

struct VoteCsr {
  std::vector<std::size_t> offsets;
  std::vector<VoteEntry> entries;

  static VoteCsr build(const LabelMatrix& votes) {
    VoteCsr out;
    out.offsets.assign(std::size_t(votes.n) + 1, 0);
    for (int i = 0; i < votes.n; ++i) {
      std::size_t cnt = 0;
      for (int j = 0; j < votes.m; ++j)
        if (votes.vote(i, j) != 0) ++cnt;
      out.offsets[i + 1] = out.offsets[i] + cnt;
    }
    out.entries.resize(out.offsets.back());
    for (int i = 0; i < votes.n; ++i) {
      std::size_t at = out.offsets[i];
      for (int j = 0; j < votes.m; ++j) {
        const int v = votes.vote(i, j);
        if (v != 0) out.entries[at++] = VoteEntry{j, v};
      }
    }
    return out;
  }

  std::span<const VoteEntry> row(int i) const {
    return {entries.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
};

// Samples class k in {1..c} proportional to exp(buf[k-1]); clobbers buf.
// Common additive score terms cancel in the softmax, so callers only add
// per-class contributions and leave untouched classes at exactly 0; those
// share a single exponential.
int draw_class_from_scores(double* buf, int c, Rng& rng) {
  double mx = 0.0;
  for (int k = 0; k < c; ++k) mx = std::max(mx, buf[k]);
  const double zero_weight = std::exp(-mx);
  double tot = 0.0;
  for (int k = 0; k < c; ++k) {
    buf[k] = buf[k] == 0.0 ? zero_weight : std::exp(buf[k] - mx);
    tot += buf[k];
  }
  const double r = rng.uniform() * tot;
  double cum = 0.0;
  for (int k = 0; k < c; ++k) {
    cum += buf[k];
    if (r < cum) return k + 1;
  }
  return c;
}

// Plurality of the non-abstain votes; random among tied classes; random
// over all classes when everything abstains.
std::vector<int> init_labels(const VoteCsr& csr, int n, int c, Rng& rng) {
  std::vector<int> y(n, 1);
  std::vector<int> counts(c, 0);
  std::vector<int> tied;
  for (int i = 0; i < n; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    int best = 0;
    for (const VoteEntry& e : csr.row(i)) best = std::max(best, ++counts[e.v - 1]);
    if (best == 0) {
      y[i] = 1 + static_cast<int>(rng.uniform_below(c));
      continue;
    }
    tied.clear();
    for (int k = 0; k < c; ++k)
      if (counts[k] == best) tied.push_back(k + 1);
    y[i] = tied.size() == 1
               ? tied[0]
               : tied[rng.uniform_below(tied.size())];
  }
  return y;
}

struct ChainAccumulator {
  SampleSummary sum;
  std::vector<std::int64_t> phi_state;   // current sum_i phi per LF
  std::vector<std::int64_t> pair_state;  // current pair statistic per source

  ChainAccumulator(int n, int c, int m, int p) {
    sum.n = n;
    sum.c = c;
    sum.marginal_counts.assign(std::size_t(n) * c, 0);
    sum.phi_sums.assign(m, 0);
    sum.pair_sums.assign(p, 0);
    phi_state.assign(m, 0);
    pair_state.assign(p, 0);
  }

  void retain(const std::vector<int>& y) {
    const int n = sum.n, c = sum.c;
    for (int i = 0; i < n; ++i) ++sum.marginal_counts[std::size_t(i) * c + y[i] - 1];
    for (std::size_t j = 0; j < phi_state.size(); ++j) sum.phi_sums[j] += phi_state[j];
    for (std::size_t k = 0; k < pair_state.size(); ++k) sum.pair_sums[k] += pair_state[k];
    ++sum.retained;
  }
};

void init_pair_state(const std::vector<PairSource>& pairs,
                     const std::vector<int>& y,
                     std::vector<std::int64_t>& state) {
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::int64_t acc = 0;
    for (const PairEntry& e : pairs[k].entries)
      if (y[e.i] == y[e.j]) acc += e.value;
    state[k] = acc;
  }
}

}  // namespace

void GibbsConfig::validate() const {
  if (burn_in < 0)
    throw std::invalid_argument("GibbsConfig: burn_in must be >= 0");
  if (samples < 1)
    throw std::invalid_argument("GibbsConfig: samples must be >= 1");
  if (thinning < 1)
    throw std::invalid_argument("GibbsConfig: thinning must be >= 1");
}

PairAdjacency PairAdjacency::build(int n, const std::vector<PairSource>& sources) {
  PairAdjacency adj;
  adj.n = n;
  adj.offsets.assign(std::size_t(n) + 1, 0);
  std::vector<std::size_t> deg(n, 0);
  for (const PairSource& src : sources) {
    if (src.n != n)
      throw std::invalid_argument("PairAdjacency: source '" + src.name +
                                  "' has mismatched n");
    src.validate();
    for (const PairEntry& e : src.entries) {
      ++deg[e.i];
      ++deg[e.j];
    }
  }
  for (int i = 0; i < n; ++i) adj.offsets[i + 1] = adj.offsets[i] + deg[i];
  adj.neighbors.resize(adj.offsets.back());
  std::vector<std::size_t> at(adj.offsets.begin(), adj.offsets.end() - 1);
  for (std::size_t k = 0; k < sources.size(); ++k) {
    for (const PairEntry& e : sources[k].entries) {
      adj.neighbors[at[e.i]++] = Neighbor{e.j, static_cast<int>(k), e.value};
      adj.neighbors[at[e.j]++] = Neighbor{e.i, static_cast<int>(k), e.value};
    }
  }
  return adj;
}

std::vector<double> conditional_y_distribution(int i, const Labeling& current,
                                               const LabelMatrix& votes,
                                               const PairAdjacency& adj,
                                               const ModelParams& params) {
  if (i < 0 || i >= votes.n)
    throw std::invalid_argument("conditional_y_distribution: index " +
                                std::to_string(i) + " outside [0," +
                                std::to_string(votes.n) + ")");
  if (current.n() != votes.n || adj.n != votes.n)
    throw std::invalid_argument("conditional_y_distribution: shape mismatch");
  if (params.theta.size() != std::size_t(votes.m))
    throw std::invalid_argument("conditional_y_distribution: theta size");
  current.validate(votes.c);

  const int c = votes.c;
  std::vector<double> buf(c, 0.0);
  double base = 0.0;
  for (int j = 0; j < votes.m; ++j) {
    const int v = votes.vote(i, j);
    if (v == 0) continue;
    base -= params.theta[j];
    buf[v - 1] += 2.0 * params.theta[j];
  }
  for (const PairAdjacency::Neighbor& nb : adj.row(i)) {
    if (nb.source < 0 || nb.source >= static_cast<int>(params.eta.size()))
      throw std::invalid_argument("conditional_y_distribution: eta size");
    buf[current.y[nb.other] - 1] += params.eta[nb.source] * nb.value;
  }

  double mx = base + buf[0];
  for (int k = 0; k < c; ++k) mx = std::max(mx, base + buf[k]);
  double tot = 0.0;
  for (int k = 0; k < c; ++k) {
    buf[k] = std::exp(base + buf[k] - mx);
    tot += buf[k];
  }
  for (int k = 0; k < c; ++k) buf[k] /= tot;
  return buf;
}

SampleSummary run_clamped_chain(const LabelMatrix& votes,
                                const std::vector<PairSource>& pairs,
                                const ModelParams& params,
                                const GibbsConfig& cfg) {
  check_consistent(votes, pairs, params);
  cfg.validate();
  const int n = votes.n, m = votes.m, c = votes.c;
  const int p = static_cast<int>(pairs.size());

  const VoteCsr csr = VoteCsr::build(votes);
  const PairAdjacency adj = PairAdjacency::build(n, pairs);
  Rng rng(cfg.seed);

  std::vector<int> y = init_labels(csr, n, c, rng);
  ChainAccumulator acc(n, c, m, p);
  for (int i = 0; i < n; ++i)
    for (const VoteEntry& e : csr.row(i))
      acc.phi_state[e.lf] += phi_of(e.v, y[i]);
  init_pair_state(pairs, y, acc.pair_state);

  const double* theta = params.theta.data();
  const double* eta = params.eta.data();
  std::vector<double> buf(c);

  const long long total = cfg.burn_in + cfg.samples * cfg.thinning;
  for (long long sweep = 0; sweep < total; ++sweep) {
    for (int i = 0; i < n; ++i) {
      // The -theta_j "mismatch" baseline is common to every class and
      // cancels in the softmax; only the +2*theta agreement bonus counts.
      std::fill(buf.begin(), buf.end(), 0.0);
      const auto row = csr.row(i);
      for (const VoteEntry& e : row) buf[e.v - 1] += 2.0 * theta[e.lf];
      const auto nbrs = adj.row(i);
      for (const PairAdjacency::Neighbor& nb : nbrs)
        buf[y[nb.other] - 1] += eta[nb.source] * nb.value;

      const int ny = draw_class_from_scores(buf.data(), c, rng);
      const int oy = y[i];
      if (ny != oy) {
        for (const VoteEntry& e : row)
          acc.phi_state[e.lf] += phi_of(e.v, ny) - phi_of(e.v, oy);
        for (const PairAdjacency::Neighbor& nb : nbrs)
          acc.pair_state[nb.source] +=
              std::int64_t(nb.value) * ((ny == y[nb.other]) - (oy == y[nb.other]));
        y[i] = ny;
      }
    }
    if (sweep >= cfg.burn_in && (sweep - cfg.burn_in + 1) % cfg.thinning == 0)
      acc.retain(y);
  }
  return acc.sum;
}

SampleSummary run_unclamped_chain(const ProblemShape& shape,
                                  const std::vector<PairSource>& pairs,
                                  const ModelParams& params,
                                  const GibbsConfig& cfg) {
  shape.validate();
  cfg.validate();
  if (static_cast<int>(pairs.size()) != shape.p)
    throw std::invalid_argument("run_unclamped_chain: p mismatch");
  if (params.theta.size() != std::size_t(shape.m) ||
      params.eta.size() != std::size_t(shape.p))
    throw std::invalid_argument("run_unclamped_chain: params size mismatch");
  params.validate();

  const int n = shape.n, m = shape.m, c = shape.c, p = shape.p;
  const PairAdjacency adj = PairAdjacency::build(n, pairs);
  Rng rng(cfg.seed);

  // No observed votes: labels start uniform, votes start all-abstain and
  // are resampled in full during the first sweep.
  std::vector<int> y(n);
  for (int i = 0; i < n; ++i) y[i] = 1 + static_cast<int>(rng.uniform_below(c));
  std::vector<int> lambda(std::size_t(n) * m, 0);

  ChainAccumulator acc(n, c, m, p);
  init_pair_state(pairs, y, acc.pair_state);

  // Per-LF categorical weights over {match, abstain, each other class},
  // scaled by exp(-|theta|) so large weights cannot overflow.
  struct SiteTable {
    double match_at;    // cumulative threshold for v = y_i
    double abstain_at;  // cumulative threshold for v = 0
    double inv_other;   // 1 / weight of each remaining class
    double total;
  };
  std::vector<SiteTable> site(m);
  for (int j = 0; j < m; ++j) {
    const double t = params.theta[j];
    const double a = std::abs(t);
    const double wm = std::exp(t - a);
    const double wa = std::exp(-a);
    const double wo = std::exp(-t - a);
    site[j] = SiteTable{wm, wm + wa, 1.0 / wo, wm + wa + (c - 1) * wo};
  }

  const double* theta = params.theta.data();
  const double* eta = params.eta.data();
  std::vector<double> buf(c);

  const long long total = cfg.burn_in + cfg.samples * cfg.thinning;
  for (long long sweep = 0; sweep < total; ++sweep) {
    // Vote phase: exact categorical conditional per site.
    for (int i = 0; i < n; ++i) {
      int* row = &lambda[std::size_t(i) * m];
      const int yi = y[i];
      for (int j = 0; j < m; ++j) {
        const SiteTable& tbl = site[j];
        const double r = rng.uniform() * tbl.total;
        int v;
        if (r < tbl.match_at) {
          v = yi;
        } else if (r < tbl.abstain_at) {
          v = 0;
        } else {
          // inv_other can be inf (underflowed weight); NaN/inf fall through
          // to the last slot, negatives clamp to the first.
          const double idx_d = (r - tbl.abstain_at) * tbl.inv_other;
          long long idx = idx_d < static_cast<double>(c - 2)
                              ? static_cast<long long>(idx_d)
                              : (c - 2);
          if (!(idx >= 0)) idx = 0;
          const int cls = static_cast<int>(idx) + 1;
          v = cls < yi ? cls : cls + 1;
        }
        const int old = row[j];
        if (v != old) {
          acc.phi_state[j] += phi_of(v, yi) - phi_of(old, yi);
          row[j] = v;
        }
      }
    }
    // Label phase; as in the clamped chain, only agreement bonuses enter.
    for (int i = 0; i < n; ++i) {
      const int* row = &lambda[std::size_t(i) * m];
      std::fill(buf.begin(), buf.end(), 0.0);
      for (int j = 0; j < m; ++j) {
        const int v = row[j];
        if (v != 0) buf[v - 1] += 2.0 * theta[j];
      }
      const auto nbrs = adj.row(i);
      for (const PairAdjacency::Neighbor& nb : nbrs)
        buf[y[nb.other] - 1] += eta[nb.source] * nb.value;

      const int ny = draw_class_from_scores(buf.data(), c, rng);
      const int oy = y[i];
      if (ny != oy) {
        for (int j = 0; j < m; ++j) {
          const int v = row[j];
          if (v != 0) acc.phi_state[j] += phi_of(v, ny) - phi_of(v, oy);
        }
        for (const PairAdjacency::Neighbor& nb : nbrs)
          acc.pair_state[nb.source] +=
              std::int64_t(nb.value) * ((ny == y[nb.other]) - (oy == y[nb.other]));
        y[i] = ny;
      }
    }
    if (sweep >= cfg.burn_in && (sweep - cfg.burn_in + 1) % cfg.thinning == 0)
      acc.retain(y);
  }
  return acc.sum;
}

}  // namespace pairlabel
