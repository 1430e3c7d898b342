#include "pairlabel/factor_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pairlabel {

namespace {

// Guard against c^n blowing past the enumeration budget.
void check_enumerable(int n, int c) {
  double size = 1.0;
  for (int i = 0; i < n; ++i) {
    size *= c;
    if (size > kEnumerationGuard)
      throw std::length_error(
          "enumeration guard: c^n exceeds " + std::to_string(kEnumerationGuard) +
          " (n=" + std::to_string(n) + ", c=" + std::to_string(c) + ")");
  }
}

// Per-sample, per-class vote scores: V[i][k-1] = sum_j theta_j*phi(v_ij, k).
std::vector<double> vote_score_table(const LabelMatrix& votes,
                                     const ModelParams& params) {
  const int n = votes.n, m = votes.m, c = votes.c;
  std::vector<double> table(std::size_t(n) * c, 0.0);
  for (int i = 0; i < n; ++i) {
    double* row = &table[std::size_t(i) * c];
    for (int j = 0; j < m; ++j) {
      const int v = votes.vote(i, j);
      if (v == 0) continue;
      const double t = params.theta[j];
      for (int k = 0; k < c; ++k) row[k] -= t;
      row[v - 1] += 2.0 * t;
    }
  }
  return table;
}

// log(e^t + 1 + (c-1) e^-t), stable for large |t|.
double log_site_partition(double t, int c) {
  const double a = std::abs(t);
  return a + std::log(std::exp(t - a) + std::exp(-a) +
                      (c - 1) * std::exp(-t - a));
}

// (e^t - (c-1) e^-t) / (e^t + (c-1) e^-t + 1), stable for large |t|.
double site_phi_expectation(double t, int c) {
  const double a = std::abs(t);
  const double ep = std::exp(t - a);
  const double em = std::exp(-t - a);
  return (ep - (c - 1) * em) / (ep + (c - 1) * em + std::exp(-a));
}

// Everything a full sweep over all c^n labelings can produce. `vote_table`
// may be empty, in which case only pair factors contribute to the weights
// (the label marginal of the unclamped model).
struct EnumerationResult {
  double log_weight_sum = 0.0;          // log sum_Y exp(score(Y))
  std::vector<double> marginals;        // n*c, row-stochastic
  std::vector<double> pair_expectation; // per source, E[sum v*1[y_i==y_j]]
};

EnumerationResult enumerate_labelings(int n, int c,
                                      const std::vector<double>& vote_table,
                                      const std::vector<PairSource>& pairs,
                                      const ModelParams& params,
                                      bool want_marginals,
                                      bool want_pair_expectation) {
  check_enumerable(n, c);
  const int p = static_cast<int>(pairs.size());

  std::vector<int> y(n, 1);
  std::vector<double> pair_stat(p, 0.0);

  auto score_of = [&](const std::vector<int>& lab) {
    double s = 0.0;
    if (!vote_table.empty())
      for (int i = 0; i < n; ++i) s += vote_table[std::size_t(i) * c + lab[i] - 1];
    for (int k = 0; k < p; ++k) {
      double acc = 0.0;
      for (const PairEntry& e : pairs[k].entries)
        if (lab[e.i] == lab[e.j]) acc += e.value;
      pair_stat[k] = acc;
      s += params.eta[k] * acc;
    }
    return s;
  };

  auto advance = [&](std::vector<int>& lab) {
    for (int i = n - 1; i >= 0; --i) {
      if (lab[i] < c) {
        ++lab[i];
        return true;
      }
      lab[i] = 1;
    }
    return false;
  };

  // Pass 1: the max score, for stable exponentiation.
  double max_score = -std::numeric_limits<double>::infinity();
  do {
    max_score = std::max(max_score, score_of(y));
  } while (advance(y));

  // Pass 2: accumulate normalized weights and expectations.
  EnumerationResult out;
  if (want_marginals) out.marginals.assign(std::size_t(n) * c, 0.0);
  if (want_pair_expectation) out.pair_expectation.assign(p, 0.0);
  double weight_sum = 0.0;
  std::fill(y.begin(), y.end(), 1);
  do {
    const double w = std::exp(score_of(y) - max_score);
    weight_sum += w;
    if (want_marginals)
      for (int i = 0; i < n; ++i)
        out.marginals[std::size_t(i) * c + y[i] - 1] += w;
    if (want_pair_expectation)
      for (int k = 0; k < p; ++k) out.pair_expectation[k] += w * pair_stat[k];
  } while (advance(y));

  out.log_weight_sum = max_score + std::log(weight_sum);
  if (want_marginals) {
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int k = 0; k < c; ++k) row += out.marginals[std::size_t(i) * c + k];
      for (int k = 0; k < c; ++k) out.marginals[std::size_t(i) * c + k] /= row;
    }
  }
  if (want_pair_expectation)
    for (int k = 0; k < p; ++k) out.pair_expectation[k] /= weight_sum;
  return out;
}

}  // namespace

int factor_phi(int vote, int y, int c) {
  if (c < 2) throw std::invalid_argument("factor_phi: c must be >= 2");
  if (vote < 0 || vote > c)
    throw std::invalid_argument("factor_phi: vote " + std::to_string(vote) +
                                " outside {0.." + std::to_string(c) + "}");
  if (y < 1 || y > c)
    throw std::invalid_argument("factor_phi: label " + std::to_string(y) +
                                " outside {1.." + std::to_string(c) + "}");
  if (vote == 0) return 0;
  return vote == y ? 1 : -1;
}

double log_density_unnormalized(const Labeling& labels,
                                const LabelMatrix& votes,
                                const std::vector<PairSource>& pairs,
                                const ModelParams& params) {
  check_consistent(votes, pairs, params);
  if (labels.n() != votes.n)
    throw std::invalid_argument("log_density_unnormalized: labeling has n = " +
                                std::to_string(labels.n()) + ", votes have " +
                                std::to_string(votes.n));
  labels.validate(votes.c);

  double s = 0.0;
  for (int j = 0; j < votes.m; ++j) {
    const double t = params.theta[j];
    for (int i = 0; i < votes.n; ++i) {
      const int v = votes.vote(i, j);
      if (v == 0) continue;
      s += (v == labels.y[i]) ? t : -t;
    }
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    double acc = 0.0;
    for (const PairEntry& e : pairs[k].entries)
      if (labels.y[e.i] == labels.y[e.j]) acc += e.value;
    s += params.eta[k] * acc;
  }
  return s;
}

PosteriorEstimate exact_posterior(const LabelMatrix& votes,
                                  const std::vector<PairSource>& pairs,
                                  const ModelParams& params) {
  check_consistent(votes, pairs, params);
  const int n = votes.n, c = votes.c;
  auto table = vote_score_table(votes, params);
  auto res = enumerate_labelings(n, c, table, pairs, params,
                                 /*want_marginals=*/true,
                                 /*want_pair_expectation=*/false);

  PosteriorEstimate post;
  post.n = n;
  post.c = c;
  post.marginals = std::move(res.marginals);
  post.map_labels.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int k = 1; k < c; ++k)
      if (post.marginals[std::size_t(i) * c + k] >
          post.marginals[std::size_t(i) * c + best])
        best = k;
    post.map_labels[i] = best + 1;
  }
  return post;
}

NllAndGradient exact_nll_and_gradient(const LabelMatrix& votes,
                                      const std::vector<PairSource>& pairs,
                                      const ModelParams& params) {
  check_consistent(votes, pairs, params);
  const int n = votes.n, m = votes.m, c = votes.c;
  const int p = static_cast<int>(pairs.size());

  // Clamped side: p(Y | observed votes).
  auto table = vote_score_table(votes, params);
  auto clamped = enumerate_labelings(n, c, table, pairs, params, true, p > 0);

  // Model side: the label marginal sees only the pair factors; the vote
  // sites are handled analytically.
  auto model = enumerate_labelings(n, c, {}, pairs, params, false, p > 0);

  double log_z = model.log_weight_sum;
  for (int j = 0; j < m; ++j) log_z += n * log_site_partition(params.theta[j], c);

  NllAndGradient out;
  out.nll = log_z - clamped.log_weight_sum;
  out.gradient.resize(std::size_t(m) + p, 0.0);

  for (int j = 0; j < m; ++j) {
    const double model_term = n * site_phi_expectation(params.theta[j], c);
    double clamped_term = 0.0;
    for (int i = 0; i < n; ++i) {
      const int v = votes.vote(i, j);
      if (v == 0) continue;
      // E[phi(v, y_i)] = 2 P(y_i = v) - 1 for a non-abstain vote.
      clamped_term += 2.0 * clamped.marginals[std::size_t(i) * c + v - 1] - 1.0;
    }
    out.gradient[j] = model_term - clamped_term;
  }
  for (int k = 0; k < p; ++k)
    out.gradient[std::size_t(m) + k] =
        model.pair_expectation[k] - clamped.pair_expectation[k];
  return out;
}

}  // namespace pairlabel
