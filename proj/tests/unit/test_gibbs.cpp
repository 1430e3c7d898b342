#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pairlabel/factor_model.hpp"
#include "pairlabel/gibbs.hpp"
#include "pairlabel/rng.hpp"
#include "pairlabel/types.hpp"

using namespace pairlabel;

namespace {

LabelMatrix random_votes(int n, int m, int c, Rng& rng, double abstain = 0.4) {
  LabelMatrix votes(n, m, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      votes.vote(i, j) = rng.uniform() < abstain
                             ? 0
                             : 1 + static_cast<int>(rng.uniform_below(c));
  return votes;
}

PairSource random_pairs(int n, int count, Rng& rng) {
  PairSource src;
  src.n = n;
  src.name = "s";
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(i, j);
  for (int t = 0; t < count; ++t) {
    const std::size_t pick = t + rng.uniform_below(all.size() - t);
    std::swap(all[t], all[pick]);
    src.entries.push_back(
        PairEntry{all[t].first, all[t].second, rng.uniform() < 0.5 ? -1 : 1});
  }
  std::sort(src.entries.begin(), src.entries.end(),
            [](const PairEntry& a, const PairEntry& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  return src;
}

}  // namespace

TEST_SUITE("gibbs") {

TEST_CASE("conditional distribution is uniform at zero energy") {
  LabelMatrix votes(2, 1, 4, {0, 0});
  PairAdjacency adj = PairAdjacency::build(2, {});
  ModelParams params{{0.0}, {}};
  Labeling lab{{1, 2}};
  auto dist = conditional_y_distribution(0, lab, votes, adj, params);
  double sum = 0.0;
  for (double v : dist) {
    CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    sum += v;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("conditional distribution: one vote at theta = ln 3") {
  LabelMatrix votes(1, 1, 2, {1});
  PairAdjacency adj = PairAdjacency::build(1, {});
  ModelParams params{{std::log(3.0)}, {}};
  Labeling lab{{1}};
  auto dist = conditional_y_distribution(0, lab, votes, adj, params);
  CHECK(dist[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(dist[1] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("conditional distribution: one must-link neighbor at eta = ln 3") {
  LabelMatrix votes(2, 1, 2, {0, 0});
  PairSource src;
  src.n = 2;
  src.name = "s";
  src.entries = {PairEntry{0, 1, +1}};
  PairAdjacency adj = PairAdjacency::build(2, {src});
  ModelParams params{{0.0}, {std::log(3.0)}};
  Labeling lab{{1, 2}};  // neighbor currently labeled 2
  auto dist = conditional_y_distribution(0, lab, votes, adj, params);
  CHECK(dist[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dist[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("conditional distribution sums to one for wild parameters") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto votes = random_votes(5, 3, 3, rng);
    auto src = random_pairs(5, 4, rng);
    PairAdjacency adj = PairAdjacency::build(5, {src});
    ModelParams params{{-30.0 + 60.0 * rng.uniform(), 5.0, -5.0},
                       {40.0 * rng.uniform() - 20.0}};
    Labeling lab{{1, 2, 3, 1, 2}};
    for (int i = 0; i < 5; ++i) {
      auto dist = conditional_y_distribution(i, lab, votes, adj, params);
      double sum = 0.0;
      for (double v : dist) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("pair adjacency is symmetric and complete") {
  Rng rng(23);
  auto a = random_pairs(6, 5, rng);
  auto b = random_pairs(6, 4, rng);
  b.name = "t";
  PairAdjacency adj = PairAdjacency::build(6, {a, b});
  std::size_t listed = 0;
  for (int i = 0; i < 6; ++i) {
    for (const auto& nb : adj.row(i)) {
      ++listed;
      bool mirrored = false;
      for (const auto& back : adj.row(nb.other))
        if (back.other == i && back.source == nb.source &&
            back.value == nb.value)
          mirrored = true;
      CHECK(mirrored);
    }
  }
  CHECK(listed == 2 * (a.entries.size() + b.entries.size()));
}

TEST_CASE("clamped chain is deterministic under a fixed seed") {
  Rng rng(3);
  auto votes = random_votes(6, 3, 3, rng);
  auto src = random_pairs(6, 4, rng);
  ModelParams params{{0.4, -0.2, 0.9}, {0.6}};
  GibbsConfig cfg{50, 100, 2, 424242};
  auto s1 = run_clamped_chain(votes, {src}, params, cfg);
  auto s2 = run_clamped_chain(votes, {src}, params, cfg);
  CHECK(s1.marginal_counts == s2.marginal_counts);
  CHECK(s1.phi_sums == s2.phi_sums);
  CHECK(s1.pair_sums == s2.pair_sums);
  CHECK(s1.retained == s2.retained);

  GibbsConfig other = cfg;
  other.seed = 7;
  auto s3 = run_clamped_chain(votes, {src}, params, other);
  CHECK(s1.marginal_counts != s3.marginal_counts);
}

TEST_CASE("retained equals samples for any thinning") {
  LabelMatrix votes(3, 2, 2, {1, 0, 2, 1, 0, 2});
  ModelParams params{{0.2, 0.3}, {}};
  for (long long thinning : {1, 2, 5}) {
    GibbsConfig cfg{10, 17, thinning, 9};
    auto sum = run_clamped_chain(votes, {}, params, cfg);
    CHECK(sum.retained == 17);
    for (int i = 0; i < 3; ++i) {
      std::int64_t row = 0;
      for (int k = 0; k < 2; ++k) row += sum.marginal_counts[i * 2 + k];
      CHECK(row == 17);
    }
  }
}

TEST_CASE("near-deterministic conditionals pin unanimous votes") {
  const int n = 5, m = 3, c = 4;
  LabelMatrix votes(n, m, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) votes.vote(i, j) = 3;
  ModelParams params{{20.0, 20.0, 20.0}, {}};
  GibbsConfig cfg{20, 500, 1, 17};
  auto sum = run_clamped_chain(votes, {}, params, cfg);
  for (int i = 0; i < n; ++i)
    CHECK(static_cast<double>(sum.marginal_counts[i * c + 2]) / 500.0 >= 0.99);
}

TEST_CASE("clamped marginals converge to the enumeration oracle") {
  Rng rng(29);
  auto votes = random_votes(4, 3, 3, rng);
  auto src = random_pairs(4, 3, rng);
  ModelParams params{{0.8, -0.5, 0.3}, {0.7}};

  auto exact = exact_posterior(votes, {src}, params);
  GibbsConfig cfg{500, 5000, 1, 99};
  auto sum = run_clamped_chain(votes, {src}, params, cfg);

  double max_abs = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 1; k <= 3; ++k) {
      const double est =
          static_cast<double>(sum.marginal_counts[i * 3 + k - 1]) / 5000.0;
      max_abs = std::max(max_abs, std::abs(est - exact.marginal(i, k)));
    }
  CHECK(max_abs <= 0.02);
}

TEST_CASE("label-permutation equivariance against exact marginals") {
  Rng rng(47);
  auto votes = random_votes(4, 3, 3, rng);
  ModelParams params{{0.9, 0.4, -0.3}, {}};
  const std::vector<int> perm{3, 1, 2};  // class k -> perm[k-1]

  LabelMatrix pvotes = votes;
  for (int& v : pvotes.votes)
    if (v != 0) v = perm[v - 1];

  auto exact = exact_posterior(votes, {}, params);
  GibbsConfig cfg{300, 4000, 1, 5};
  auto sum = run_clamped_chain(pvotes, {}, params, cfg);
  for (int i = 0; i < 4; ++i)
    for (int k = 1; k <= 3; ++k) {
      const double est =
          static_cast<double>(sum.marginal_counts[i * 3 + perm[k - 1] - 1]) /
          4000.0;
      CHECK(std::abs(est - exact.marginal(i, k)) <= 0.03);
    }
}

TEST_CASE("unclamped chain: vote sites at theta = 0") {
  // E[phi] per site is (2-c)/(c+1); -0.25 for c = 3.
  const int n = 200, m = 2, c = 3;
  ProblemShape shape{n, m, c, 0};
  ModelParams params{{0.0, 0.0}, {}};
  GibbsConfig cfg{20, 2000, 1, 31};
  auto sum = run_unclamped_chain(shape, {}, params, cfg);
  for (int j = 0; j < m; ++j) {
    const double mean = static_cast<double>(sum.phi_sums[j]) /
                        (static_cast<double>(sum.retained) * n);
    CHECK(std::abs(mean - (-0.25)) <= 0.02);
  }
}

TEST_CASE("unclamped chain: pair matches at eta = 0 occur at rate 1/c") {
  const int n = 30, m = 1, c = 3;
  Rng rng(53);
  PairSource src = random_pairs(n, 12, rng);
  for (PairEntry& e : src.entries) e.value = +1;  // q must-links
  ProblemShape shape{n, m, c, 1};
  ModelParams params{{0.4}, {0.0}};
  GibbsConfig cfg{50, 4000, 1, 61};
  auto sum = run_unclamped_chain(shape, {src}, params, cfg);
  const double mean =
      static_cast<double>(sum.pair_sums[0]) / static_cast<double>(sum.retained);
  CHECK(std::abs(mean - 12.0 / 3.0) <= 0.4);
  for (int i = 0; i < n; ++i) {
    std::int64_t row = 0;
    for (int k = 0; k < c; ++k) row += sum.marginal_counts[i * c + k];
    CHECK(row == sum.retained);
  }
}

TEST_CASE("unclamped chain is deterministic under a fixed seed") {
  ProblemShape shape{5, 2, 3, 0};
  ModelParams params{{0.5, -0.1}, {}};
  GibbsConfig cfg{10, 50, 3, 12345};
  auto s1 = run_unclamped_chain(shape, {}, params, cfg);
  auto s2 = run_unclamped_chain(shape, {}, params, cfg);
  CHECK(s1.marginal_counts == s2.marginal_counts);
  CHECK(s1.phi_sums == s2.phi_sums);
  CHECK(s1.retained == s2.retained);
}

TEST_CASE("gibbs config validation") {
  const GibbsConfig neg_burn{-1, 10, 1, 0};
  const GibbsConfig no_samples{0, 0, 1, 0};
  const GibbsConfig no_thinning{0, 10, 0, 0};
  const GibbsConfig minimal{0, 1, 1, 0};
  CHECK_THROWS_AS(neg_burn.validate(), std::invalid_argument);
  CHECK_THROWS_AS(no_samples.validate(), std::invalid_argument);
  CHECK_THROWS_AS(no_thinning.validate(), std::invalid_argument);
  CHECK_NOTHROW(minimal.validate());
}

}  // TEST_SUITE
