#include "pairlabel/trainer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pairlabel/factor_model.hpp"
#include "pairlabel/rng.hpp"

namespace pairlabel {

namespace {

double mean_or_nan(const std::vector<std::int64_t>& sums, std::int64_t scale) {
  if (sums.empty() || scale == 0) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (std::int64_t v : sums) acc += static_cast<double>(v);
  return acc / (static_cast<double>(scale) * sums.size());
}

}  // namespace

void TrainConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("TrainConfig: steps must be >= 1");
  if (!(step_size > 0.0))
    throw std::invalid_argument("TrainConfig: step_size must be > 0");
  if (l2 < 0.0) throw std::invalid_argument("TrainConfig: l2 must be >= 0");
  gibbs.validate();
}

std::vector<double> estimate_gradient(const LabelMatrix& votes,
                                      const std::vector<PairSource>& pairs,
                                      const ModelParams& params,
                                      const GibbsConfig& gibbs) {
  check_consistent(votes, pairs, params);
  gibbs.validate();
  const int m = votes.m;
  const int p = static_cast<int>(pairs.size());

  GibbsConfig clamped_cfg = gibbs;
  clamped_cfg.seed = derive_seed(gibbs.seed, {1});
  GibbsConfig unclamped_cfg = gibbs;
  unclamped_cfg.seed = derive_seed(gibbs.seed, {2});

  const SampleSummary clamped = run_clamped_chain(votes, pairs, params, clamped_cfg);
  const SampleSummary unclamped =
      run_unclamped_chain(shape_of(votes, pairs), pairs, params, unclamped_cfg);

  std::vector<double> grad(std::size_t(m) + p, 0.0);
  const double retained = static_cast<double>(clamped.retained);
  for (int j = 0; j < m; ++j)
    grad[j] = static_cast<double>(unclamped.phi_sums[j] - clamped.phi_sums[j]) / retained;
  for (int k = 0; k < p; ++k)
    grad[std::size_t(m) + k] =
        static_cast<double>(unclamped.pair_sums[k] - clamped.pair_sums[k]) / retained;
  return grad;
}

std::pair<ModelParams, TrainTrace> fit(const LabelMatrix& votes,
                                       const std::vector<PairSource>& pairs,
                                       const TrainConfig& cfg) {
  cfg.validate();
  const int m = votes.m;
  const int p = static_cast<int>(pairs.size());

  ModelParams params;
  params.theta.assign(m, cfg.init_theta);
  params.eta.assign(p, cfg.init_eta);
  check_consistent(votes, pairs, params);

  TrainTrace trace;
  trace.records.reserve(cfg.steps);

  for (int step = 0; step < cfg.steps; ++step) {
    TrainStepRecord rec;
    rec.step = step;
    std::vector<double> grad;
    if (cfg.exact_gradient) {
      grad = exact_nll_and_gradient(votes, pairs, params).gradient;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rec.clamped_phi_mean = rec.unclamped_phi_mean = nan;
      rec.clamped_pair_mean = rec.unclamped_pair_mean = nan;
    } else {
      GibbsConfig g = cfg.gibbs;
      g.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(step)});

      GibbsConfig clamped_cfg = g;
      clamped_cfg.seed = derive_seed(g.seed, {1});
      GibbsConfig unclamped_cfg = g;
      unclamped_cfg.seed = derive_seed(g.seed, {2});
      const SampleSummary clamped =
          run_clamped_chain(votes, pairs, params, clamped_cfg);
      const SampleSummary unclamped =
          run_unclamped_chain(shape_of(votes, pairs), pairs, params, unclamped_cfg);

      grad.assign(std::size_t(m) + p, 0.0);
      const double retained = static_cast<double>(clamped.retained);
      for (int j = 0; j < m; ++j)
        grad[j] =
            static_cast<double>(unclamped.phi_sums[j] - clamped.phi_sums[j]) / retained;
      for (int k = 0; k < p; ++k)
        grad[std::size_t(m) + k] =
            static_cast<double>(unclamped.pair_sums[k] - clamped.pair_sums[k]) /
            retained;

      const std::int64_t site_scale = clamped.retained * votes.n;
      rec.clamped_phi_mean = mean_or_nan(clamped.phi_sums, site_scale);
      rec.unclamped_phi_mean = mean_or_nan(unclamped.phi_sums, site_scale);
      rec.clamped_pair_mean = mean_or_nan(clamped.pair_sums, clamped.retained);
      rec.unclamped_pair_mean = mean_or_nan(unclamped.pair_sums, unclamped.retained);
    }

    double norm2 = 0.0;
    for (int j = 0; j < m; ++j) {
      params.theta[j] -= cfg.step_size * (grad[j] + cfg.l2 * params.theta[j]);
      norm2 += grad[j] * grad[j];
    }
    for (int k = 0; k < p; ++k) {
      const double gk = grad[std::size_t(m) + k];
      params.eta[k] -= cfg.step_size * (gk + cfg.l2 * params.eta[k]);
      norm2 += gk * gk;
    }
    rec.grad_norm = std::sqrt(norm2);
    rec.params = params;
    trace.records.push_back(std::move(rec));

    if (!params.all_finite())
      throw std::runtime_error("fit: non-finite parameter after step " +
                               std::to_string(step));
  }
  return {params, std::move(trace)};
}

}  // namespace pairlabel
