#include <benchmark/benchmark.h>

#include "pairlabel/factor_model.hpp"
#include "pairlabel/gibbs.hpp"
#include "pairlabel/posterior.hpp"
#include "pairlabel/rng.hpp"
#include "pairlabel/synth.hpp"
#include "pairlabel/textpairs.hpp"
#include "pairlabel/trainer.hpp"

using namespace pairlabel;

namespace {

SyntheticDataset desk_dataset(int n, int c, long long pairs, std::uint64_t seed) {
  std::vector<LfSpec> lfs;
  for (int k = 1; k <= c; ++k) {
    lfs.push_back(LfSpec{k, 0.7, 0.5, 0.05});
    lfs.push_back(LfSpec{k, 0.7, 0.5, 0.05});
  }
  PairSpec ps;
  ps.count = pairs;
  ps.accuracy = 0.9;
  return generate_dataset(n, c, lfs, {ps}, seed);
}

Corpus synthetic_corpus(int docs, std::uint64_t seed) {
  Rng rng(seed);
  Corpus corpus;
  for (int d = 0; d < docs; ++d) {
    std::string text;
    for (int w = 0; w < 60; ++w) {
      text += "w" + std::to_string(rng.uniform_below(400)) + " ";
    }
    corpus.docs.push_back(text);
  }
  return corpus;
}

void BM_ClampedChain(benchmark::State& state) {
  const auto ds = desk_dataset(1000, 10, state.range(0), 7);
  ModelParams params;
  params.theta.assign(ds.votes.m, 1.0);
  params.eta.assign(1, 1.5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    GibbsConfig cfg{0, 50, 1, seed++};
    benchmark::DoNotOptimize(
        run_clamped_chain(ds.votes, ds.pair_sources, params, cfg));
  }
  state.SetItemsProcessed(state.iterations() * 50 * ds.votes.n);
}
BENCHMARK(BM_ClampedChain)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_UnclampedChain(benchmark::State& state) {
  const auto ds = desk_dataset(1000, 10, state.range(0), 7);
  ModelParams params;
  params.theta.assign(ds.votes.m, 1.0);
  params.eta.assign(1, 1.5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    GibbsConfig cfg{0, 50, 1, seed++};
    benchmark::DoNotOptimize(run_unclamped_chain(
        shape_of(ds.votes, ds.pair_sources), ds.pair_sources, params, cfg));
  }
  state.SetItemsProcessed(state.iterations() * 50 * ds.votes.n *
                          (ds.votes.m + 1));
}
BENCHMARK(BM_UnclampedChain)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_GradientStep(benchmark::State& state) {
  const auto ds = desk_dataset(1000, 10, 5000, 7);
  ModelParams params;
  params.theta.assign(ds.votes.m, 1.0);
  params.eta.assign(1, 1.5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    GibbsConfig cfg{50, 100, 1, seed++};
    benchmark::DoNotOptimize(
        estimate_gradient(ds.votes, ds.pair_sources, params, cfg));
  }
}
BENCHMARK(BM_GradientStep)->Unit(benchmark::kMillisecond);

void BM_ExactPosterior(benchmark::State& state) {
  const auto ds = desk_dataset(static_cast<int>(state.range(0)), 3, 3, 5);
  ModelParams params;
  params.theta.assign(ds.votes.m, 0.8);
  params.eta.assign(1, 0.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(exact_posterior(ds.votes, ds.pair_sources, params));
}
BENCHMARK(BM_ExactPosterior)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GenerateDataset(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(desk_dataset(1000, 10, 5000, seed++));
}
BENCHMARK(BM_GenerateDataset)->Unit(benchmark::kMillisecond);

void BM_TfidfKnn(benchmark::State& state) {
  const Corpus corpus = synthetic_corpus(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    const SparseVectors vectors = build_tfidf(corpus, 0.001);
    benchmark::DoNotOptimize(mknn_pairs(build_knn(vectors, 10)));
  }
}
BENCHMARK(BM_TfidfKnn)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
