#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pairlabel/factor_model.hpp"
#include "pairlabel/posterior.hpp"
#include "pairlabel/rng.hpp"

using namespace pairlabel;

TEST_SUITE("posterior") {

TEST_CASE("unanimous strong votes give that MAP label everywhere") {
  const int n = 6, m = 3, c = 3;
  LabelMatrix votes(n, m, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) votes.vote(i, j) = 2;
  ModelParams params{{5.0, 5.0, 5.0}, {}};
  GibbsConfig cfg{100, 500, 1, 3};
  auto post = infer_posterior(votes, {}, params, cfg);
  post.validate();
  for (int i = 0; i < n; ++i) CHECK(post.map_labels[i] == 2);
}

TEST_CASE("MAP labels match the enumeration oracle argmax") {
  Rng rng(91);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 4, m = 3, c = 3;
    LabelMatrix votes(n, m, c);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        votes.vote(i, j) = rng.uniform() < 0.3
                               ? 0
                               : 1 + static_cast<int>(rng.uniform_below(c));
    // Clearly separated marginals so the sampled argmax is stable.
    ModelParams params{{1.5, 1.2, 0.8}, {}};
    auto exact = exact_posterior(votes, {}, params);
    GibbsConfig cfg{300, 4000, 1, derive_seed(17, {static_cast<std::uint64_t>(trial)})};
    auto post = infer_posterior(votes, {}, params, cfg);

    for (int i = 0; i < n; ++i) {
      double best = exact.marginal(i, exact.map_labels[i]);
      double second = 0.0;
      for (int k = 1; k <= c; ++k)
        if (k != exact.map_labels[i]) second = std::max(second, exact.marginal(i, k));
      // Rows separated beyond the sampling tie band must match the oracle.
      if (best - second > 0.12)
        CHECK(post.map_labels[i] == exact.map_labels[i]);
    }
  }
}

TEST_CASE("zero model: marginals uniform, MAP breaks ties to class 1") {
  LabelMatrix votes(5, 2, 4);
  ModelParams params{{0.0, 0.0}, {}};
  GibbsConfig cfg{100, 4000, 1, 23};
  auto post = infer_posterior(votes, {}, params, cfg);
  for (int i = 0; i < 5; ++i) {
    for (int k = 1; k <= 4; ++k)
      CHECK(std::abs(post.marginal(i, k) - 0.25) <= 0.03);
    // Classes the chain cannot separate are ties, and ties go to class 1.
    CHECK(post.map_labels[i] == 1);
  }
  auto exact = exact_posterior(votes, {}, params);
  for (int i = 0; i < 5; ++i) CHECK(exact.map_labels[i] == 1);
}

TEST_CASE("majority vote: plurality, tie-break, all-abstain fallback") {
  LabelMatrix votes(3, 3, 3,
                    {1, 1, 2,    // plurality 1
                     1, 2, 0,    // tie 1 vs 2 -> 1
                     0, 0, 0});  // all abstain -> 1
  const auto mv = majority_vote(votes);
  CHECK(mv == std::vector<int>{1, 1, 1});
}

TEST_CASE("majority vote ignores abstains entirely") {
  Rng rng(5);
  const int n = 40, m = 4, c = 5;
  LabelMatrix votes(n, m, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      votes.vote(i, j) = rng.uniform() < 0.5
                             ? 0
                             : 1 + static_cast<int>(rng.uniform_below(c));
  LabelMatrix padded(n, m + 1, c);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) padded.vote(i, j) = votes.vote(i, j);
  CHECK(majority_vote(votes) == majority_vote(padded));
}

TEST_CASE("accuracy on simple hand-checked cases") {
  CHECK(accuracy({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0));
  CHECK(accuracy({1, 2}, {2, 1}) == doctest::Approx(0.0));
  CHECK(accuracy({1, 2, 3, 4}, {1, 2, 3, 1}) == doctest::Approx(0.75));
}

TEST_CASE("accuracy is symmetric and permutation-equivariant") {
  Rng rng(8);
  std::vector<int> a, b;
  for (int i = 0; i < 50; ++i) {
    a.push_back(1 + static_cast<int>(rng.uniform_below(4)));
    b.push_back(1 + static_cast<int>(rng.uniform_below(4)));
  }
  CHECK(accuracy(a, b) == accuracy(b, a));
  const std::vector<int> perm{3, 4, 1, 2};
  std::vector<int> pa, pb;
  for (int v : a) pa.push_back(perm[v - 1]);
  for (int v : b) pb.push_back(perm[v - 1]);
  CHECK(accuracy(pa, pb) == accuracy(a, b));
}

TEST_CASE("accuracy rejects mismatched or empty inputs") {
  CHECK_THROWS_AS(accuracy({1, 2}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(accuracy({}, {}), std::invalid_argument);
}

TEST_CASE("MAP is invariant to monotone rescaling of a marginal row") {
  // argmax only: scaling all marginals of a row by a positive factor and
  // renormalizing cannot change the argmax.
  PosteriorEstimate post;
  post.n = 1;
  post.c = 3;
  post.marginals = {0.2, 0.5, 0.3};
  post.map_labels = {2};
  int best = 0;
  for (int k = 1; k < 3; ++k)
    if (post.marginals[k] > post.marginals[best]) best = k;
  CHECK(best + 1 == post.map_labels[0]);
  for (double scale : {0.1, 3.0, 10.0}) {
    std::vector<double> scaled;
    for (double v : post.marginals) scaled.push_back(std::pow(v, 1.0) * scale);
    int sbest = 0;
    for (int k = 1; k < 3; ++k)
      if (scaled[k] > scaled[sbest]) sbest = k;
    CHECK(sbest == best);
  }
}

}  // TEST_SUITE
