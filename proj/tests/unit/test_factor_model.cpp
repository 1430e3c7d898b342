#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pairlabel/factor_model.hpp"
#include "pairlabel/rng.hpp"
#include "pairlabel/types.hpp"

using namespace pairlabel;

namespace {

// Independent brute-force oracle: posterior marginals by summing
// exp(log_density_unnormalized) over every labeling, no caching tricks.
std::vector<double> brute_marginals(const LabelMatrix& votes,
                                    const std::vector<PairSource>& pairs,
                                    const ModelParams& params) {
  const int n = votes.n, c = votes.c;
  std::vector<double> weights(std::size_t(n) * c, 0.0);
  Labeling lab;
  lab.y.assign(n, 1);
  double total = 0.0;
  for (;;) {
    const double w = std::exp(log_density_unnormalized(lab, votes, pairs, params));
    total += w;
    for (int i = 0; i < n; ++i) weights[std::size_t(i) * c + lab.y[i] - 1] += w;
    int at = n - 1;
    while (at >= 0 && lab.y[at] == c) lab.y[at--] = 1;
    if (at < 0) break;
    ++lab.y[at];
  }
  for (double& w : weights) w /= total;
  return weights;
}

LabelMatrix random_votes(int n, int m, int c, Rng& rng, double abstain = 0.4) {
  LabelMatrix votes(n, m, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      votes.vote(i, j) = rng.uniform() < abstain
                             ? 0
                             : 1 + static_cast<int>(rng.uniform_below(c));
  return votes;
}

PairSource random_pairs(int n, int count, Rng& rng, const std::string& name) {
  PairSource src;
  src.n = n;
  src.name = name;
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

ModelParams random_params(int m, int p, Rng& rng, double lo = -1.0, double hi = 1.0) {
  ModelParams params;
  for (int j = 0; j < m; ++j) params.theta.push_back(lo + (hi - lo) * rng.uniform());
  for (int k = 0; k < p; ++k) params.eta.push_back(lo + (hi - lo) * rng.uniform());
  return params;
}

}  // namespace

TEST_SUITE("factor_model") {

TEST_CASE("factor_phi three-case table") {
  CHECK(factor_phi(3, 3, 4) == 1);
  CHECK(factor_phi(0, 2, 4) == 0);
  CHECK(factor_phi(1, 2, 4) == -1);
  for (int c = 2; c <= 5; ++c)
    for (int v = 0; v <= c; ++v)
      for (int y = 1; y <= c; ++y)
        CHECK(factor_phi(v, y, c) == (v == 0 ? 0 : (v == y ? 1 : -1)));
}

TEST_CASE("factor_phi rejects out-of-range arguments") {
  CHECK_THROWS_AS(factor_phi(-1, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(factor_phi(4, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(factor_phi(1, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(factor_phi(1, 4, 3), std::invalid_argument);
}

TEST_CASE("log density: single agreeing factor") {
  LabelMatrix votes(1, 1, 2, {1});
  ModelParams params{{0.5}, {}};
  Labeling lab{{1}};
  CHECK(log_density_unnormalized(lab, votes, {}, params) == doctest::Approx(0.5));
}

TEST_CASE("log density: single satisfied must-link") {
  LabelMatrix votes(2, 1, 2, {0, 0});  // all abstain
  PairSource src;
  src.n = 2;
  src.name = "s";
  src.entries = {PairEntry{0, 1, +1}};
  ModelParams params{{0.5}, {1.2}};
  Labeling lab{{1, 1}};
  CHECK(log_density_unnormalized(lab, votes, {src}, params) ==
        doctest::Approx(1.2));
}

TEST_CASE("log density: hand sum of three factor terms") {
  LabelMatrix votes(2, 1, 2, {1, 2});
  PairSource src;
  src.n = 2;
  src.name = "s";
  src.entries = {PairEntry{0, 1, -1}};
  ModelParams params{{1.0}, {0.7}};
  Labeling lab{{1, 1}};
  // +1.0 (agree) - 1.0 (disagree) - 0.7 (violated cannot-link)
  CHECK(log_density_unnormalized(lab, votes, {src}, params) ==
        doctest::Approx(-0.7));
}

TEST_CASE("log density matches an explicit factor sum on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(5));
    const int m = 1 + static_cast<int>(rng.uniform_below(4));
    const int c = 2 + static_cast<int>(rng.uniform_below(3));
    auto votes = random_votes(n, m, c, rng);
    auto src = random_pairs(n, std::min(3, n * (n - 1) / 2), rng, "s");
    auto params = random_params(m, 1, rng);
    Labeling lab;
    for (int i = 0; i < n; ++i)
      lab.y.push_back(1 + static_cast<int>(rng.uniform_below(c)));

    double expected = 0.0;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i)
        expected += params.theta[j] * factor_phi(votes.vote(i, j), lab.y[i], c);
    for (const PairEntry& e : src.entries)
      if (lab.y[e.i] == lab.y[e.j]) expected += params.eta[0] * e.value;

    CHECK(log_density_unnormalized(lab, votes, {src}, params) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("log density is invariant under global class permutation") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4, m = 3, c = 3;
    auto votes = random_votes(n, m, c, rng);
    auto src = random_pairs(n, 3, rng, "s");
    auto params = random_params(m, 1, rng);
    Labeling lab;
    for (int i = 0; i < n; ++i)
      lab.y.push_back(1 + static_cast<int>(rng.uniform_below(c)));

    std::vector<int> perm{2, 3, 1};  // class k -> perm[k-1]
    LabelMatrix pvotes = votes;
    for (int& v : pvotes.votes)
      if (v != 0) v = perm[v - 1];
    Labeling plab;
    for (int v : lab.y) plab.y.push_back(perm[v - 1]);

    CHECK(log_density_unnormalized(lab, votes, {src}, params) ==
          log_density_unnormalized(plab, pvotes, {src}, params));
  }
}

TEST_CASE("exact posterior: closed-form two-state instance") {
  LabelMatrix votes(1, 1, 2, {1});
  ModelParams params{{std::log(2.0)}, {}};
  auto post = exact_posterior(votes, {}, params);
  CHECK(post.marginal(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(post.marginal(0, 2) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(post.map_labels[0] == 1);
}

TEST_CASE("exact posterior: zero-energy model is uniform") {
  Rng rng(5);
  auto votes = random_votes(4, 3, 3, rng);
  ModelParams params{{0.0, 0.0, 0.0}, {}};
  auto post = exact_posterior(votes, {}, params);
  for (int i = 0; i < 4; ++i)
    for (int k = 1; k <= 3; ++k)
      CHECK(post.marginal(i, k) == doctest::Approx(1.0 / 3).epsilon(1e-12));
}

TEST_CASE("exact posterior: strong must-link keeps symmetric marginals") {
  LabelMatrix votes(2, 1, 2, {0, 0});
  PairSource src;
  src.n = 2;
  src.name = "s";
  src.entries = {PairEntry{0, 1, +1}};
  ModelParams params{{0.0}, {10.0}};
  auto post = exact_posterior(votes, {src}, params);
  CHECK(post.marginal(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(post.marginal(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact posterior agrees with the density-sum oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3, m = 2, c = 3;
    auto votes = random_votes(n, m, c, rng);
    auto src = random_pairs(n, 2, rng, "s");
    auto params = random_params(m, 1, rng);
    auto post = exact_posterior(votes, {src}, params);
    auto oracle = brute_marginals(votes, {src}, params);
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int k = 1; k <= c; ++k) {
        CHECK(post.marginal(i, k) ==
              doctest::Approx(oracle[std::size_t(i) * c + k - 1]).epsilon(1e-10));
        CHECK(post.marginal(i, k) >= 0.0);
        CHECK(post.marginal(i, k) <= 1.0);
        row += post.marginal(i, k);
      }
      CHECK(std::abs(row - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("a pair source with eta = 0 does not move the posterior") {
  Rng rng(13);
  auto votes = random_votes(4, 2, 2, rng);
  auto src = random_pairs(4, 3, rng, "s");
  ModelParams with{{0.3, -0.8}, {0.0}};
  ModelParams without{{0.3, -0.8}, {}};
  auto a = exact_posterior(votes, {src}, with);
  auto b = exact_posterior(votes, {}, without);
  for (std::size_t at = 0; at < a.marginals.size(); ++at)
    CHECK(a.marginals[at] == doctest::Approx(b.marginals[at]).epsilon(1e-12));
}

TEST_CASE("enumeration guard refuses oversized instances") {
  LabelMatrix big(21, 1, 2);
  ModelParams params{{0.5}, {}};
  CHECK_THROWS_AS(exact_posterior(big, {}, params), std::length_error);
  CHECK_THROWS_AS(exact_nll_and_gradient(big, {}, params), std::length_error);
  LabelMatrix ok(12, 1, 3);  // 3^12 = 531441 stays inside the guard
  CHECK_NOTHROW(exact_posterior(ok, {}, {{0.1}, {}}));
  LabelMatrix over(13, 1, 3);
  CHECK_THROWS_AS(exact_posterior(over, {}, {{0.1}, {}}), std::length_error);
}

TEST_CASE("marginal likelihood normalizes over all vote matrices") {
  // sum over every possible observed matrix of exp(-NLL) must be 1.
  const int n = 2, m = 1, c = 2;
  ModelParams params{{0.7}, {0.4}};
  PairSource src;
  src.n = n;
  src.name = "s";
  src.entries = {PairEntry{0, 1, +1}};

  double total = 0.0;
  for (int v0 = 0; v0 <= c; ++v0)
    for (int v1 = 0; v1 <= c; ++v1) {
      LabelMatrix votes(n, m, c, {v0, v1});
      total += std::exp(-exact_nll_and_gradient(votes, {src}, params).nll);
    }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gradient is zero for all-abstain votes at theta = 0 (c = 2)") {
  LabelMatrix votes(3, 2, 2);
  ModelParams params{{0.0, 0.0}, {}};
  auto res = exact_nll_and_gradient(votes, {}, params);
  CHECK(res.gradient[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(res.gradient[1] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng(101);
  const int n = 3, m = 2, c = 2;
  auto votes = random_votes(n, m, c, rng);
  auto src = random_pairs(n, 2, rng, "s");
  auto params = random_params(m, 1, rng);

  auto res = exact_nll_and_gradient(votes, {src}, params);
  const double h = 1e-5;
  for (std::size_t coord = 0; coord < res.gradient.size(); ++coord) {
    auto bump = [&](double eps) {
      ModelParams q = params;
      if (coord < q.theta.size())
        q.theta[coord] += eps;
      else
        q.eta[coord - q.theta.size()] += eps;
      return exact_nll_and_gradient(votes, {src}, q).nll;
    };
    const double fd = (bump(h) - bump(-h)) / (2.0 * h);
    const double rel = std::abs(fd - res.gradient[coord]) /
                       std::max(1.0, std::abs(res.gradient[coord]));
    CHECK(rel <= 1e-6);
  }
}

TEST_CASE("density with p = 0 equals the independent-model exponent") {
  Rng rng(19);
  auto votes = random_votes(5, 3, 3, rng);
  auto params = random_params(3, 0, rng);
  Labeling lab;
  for (int i = 0; i < 5; ++i)
    lab.y.push_back(1 + static_cast<int>(rng.uniform_below(3)));
  double expected = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 5; ++i)
      expected += params.theta[j] * factor_phi(votes.vote(i, j), lab.y[i], 3);
  CHECK(log_density_unnormalized(lab, votes, {}, params) ==
        doctest::Approx(expected).epsilon(1e-12));
}

}  // TEST_SUITE
