#include "pairlabel/types.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace pairlabel {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

}  // namespace

void ProblemShape::validate() const {
  if (n < 1) fail("ProblemShape: n must be >= 1, got " + std::to_string(n));
  if (m < 1) fail("ProblemShape: m must be >= 1, got " + std::to_string(m));
  if (c < 2) fail("ProblemShape: c must be >= 2, got " + std::to_string(c));
  if (p < 0) fail("ProblemShape: p must be >= 0, got " + std::to_string(p));
}

void LabelMatrix::validate() const {
  ProblemShape{n, m, c, 0}.validate();
  if (votes.size() != std::size_t(n) * std::size_t(m))
    fail("LabelMatrix: votes size " + std::to_string(votes.size()) +
         " does not match n*m = " + std::to_string(std::size_t(n) * m));
  for (int v : votes)
    if (v < 0 || v > c)
      fail("LabelMatrix: vote " + std::to_string(v) + " outside {0..c}, c=" +
           std::to_string(c));
}

void PairSource::validate() const {
  if (n < 1) fail("PairSource '" + name + "': n must be >= 1");
  std::set<std::pair<int, int>> seen;
  for (const PairEntry& e : entries) {
    if (e.i == e.j)
      fail("PairSource '" + name + "': self-pair at index " +
           std::to_string(e.i));
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
      fail("PairSource '" + name + "': pair (" + std::to_string(e.i) + "," +
           std::to_string(e.j) + ") outside [0," + std::to_string(n) + ")");
    if (e.i >= e.j)
      fail("PairSource '" + name + "': pair (" + std::to_string(e.i) + "," +
           std::to_string(e.j) + ") must satisfy i < j");
    if (e.value != -1 && e.value != 1)
      fail("PairSource '" + name + "': value " + std::to_string(e.value) +
           " not in {-1,+1}");
    if (!seen.insert({e.i, e.j}).second)
      fail("PairSource '" + name + "': duplicate pair (" +
           std::to_string(e.i) + "," + std::to_string(e.j) + ")");
  }
}

void ModelParams::validate() const {
  if (!all_finite()) fail("ModelParams: non-finite parameter");
}

bool ModelParams::all_finite() const {
  for (double v : theta)
    if (!std::isfinite(v)) return false;
  for (double v : eta)
    if (!std::isfinite(v)) return false;
  return true;
}

void Labeling::validate(int c) const {
  for (int v : y)
    if (v < 1 || v > c)
      fail("Labeling: label " + std::to_string(v) + " outside {1.." +
           std::to_string(c) + "}");
}

void PosteriorEstimate::validate() const {
  if (marginals.size() != std::size_t(n) * std::size_t(c) ||
      map_labels.size() != std::size_t(n))
    fail("PosteriorEstimate: size mismatch");
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int k = 1; k <= c; ++k) {
      const double v = marginal(i, k);
      if (v < 0.0 || v > 1.0) fail("PosteriorEstimate: entry outside [0,1]");
      row += v;
    }
    if (std::abs(row - 1.0) > 1e-9)
      fail("PosteriorEstimate: row " + std::to_string(i) +
           " does not sum to 1");
    if (map_labels[i] < 1 || map_labels[i] > c)
      fail("PosteriorEstimate: MAP label outside {1..c}");
    // The MAP label may trail the literal row maximum by at most the
    // sampling tie band of the coarsest supported chain.
    double mx = 0.0;
    for (int k = 1; k <= c; ++k) mx = std::max(mx, marginal(i, k));
    if (mx - marginal(i, map_labels[i]) > 0.75)
      fail("PosteriorEstimate: MAP label far from the row maximum");
  }
}

void check_consistent(const LabelMatrix& votes,
                      const std::vector<PairSource>& pairs,
                      const ModelParams& params) {
  votes.validate();
  if (params.theta.size() != std::size_t(votes.m))
    fail("shape mismatch: " + std::to_string(params.theta.size()) +
         " theta values for m = " + std::to_string(votes.m));
  if (params.eta.size() != pairs.size())
    fail("shape mismatch: " + std::to_string(params.eta.size()) +
         " eta values for p = " + std::to_string(pairs.size()));
  params.validate();
  for (const PairSource& src : pairs) {
    if (src.n != votes.n)
      fail("shape mismatch: pair source '" + src.name + "' has n = " +
           std::to_string(src.n) + ", votes have n = " +
           std::to_string(votes.n));
    src.validate();
  }
}

ProblemShape shape_of(const LabelMatrix& votes,
                      const std::vector<PairSource>& pairs) {
  return ProblemShape{votes.n, votes.m, votes.c,
                      static_cast<int>(pairs.size())};
}

}  // namespace pairlabel
