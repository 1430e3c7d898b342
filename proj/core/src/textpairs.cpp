#include "pairlabel/textpairs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace pairlabel {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char ch : text) {
    if (std::isalnum(ch)) {
      cur.push_back(static_cast<char>(std::tolower(ch)));
    } else if (!cur.empty()) {
      if (cur.size() >= 2) tokens.push_back(cur);
      cur.clear();
    }
  }
  if (cur.size() >= 2) tokens.push_back(cur);
  return tokens;
}

SparseVectors build_tfidf(const Corpus& corpus, double min_df) {
  if (corpus.docs.empty())
    throw std::invalid_argument("build_tfidf: empty corpus");
  const int n = corpus.n();

  std::vector<std::map<std::string, int>> counts(n);
  std::map<std::string, int> df;
  for (int i = 0; i < n; ++i) {
    for (const std::string& tok : tokenize(corpus.docs[i])) ++counts[i][tok];
    for (const auto& [term, cnt] : counts[i]) ++df[term];
  }

  SparseVectors out;
  out.min_df = min_df;
  for (const auto& [term, d] : df) {
    if (static_cast<double>(d) >= min_df * n) {
      out.vocabulary.emplace(term, static_cast<int>(out.terms.size()));
      out.terms.push_back(term);
    }
  }

  out.rows.resize(n);
  for (int i = 0; i < n; ++i) {
    double norm2 = 0.0;
    for (const auto& [term, cnt] : counts[i]) {
      const auto it = out.vocabulary.find(term);
      if (it == out.vocabulary.end()) continue;
      const double idf = std::log((1.0 + n) / (1.0 + df[term])) + 1.0;
      const double w = cnt * idf;
      out.rows[i].emplace_back(it->second, w);
      norm2 += w * w;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& [col, w] : out.rows[i]) w *= inv;
    }
    // counts[i] iterates in term order and the vocabulary preserves it,
    // so rows come out sorted by column.
  }
  return out;
}

KnnGraph build_knn(const SparseVectors& vectors, int k) {
  const int n = static_cast<int>(vectors.rows.size());
  if (k < 1 || k >= n)
    throw std::invalid_argument("build_knn: need 1 <= k < n (k=" +
                                std::to_string(k) + ", n=" + std::to_string(n) +
                                ")");

  // Inverted index: column -> (doc, weight) postings in doc order.
  std::vector<std::vector<std::pair<int, double>>> postings(vectors.terms.size());
  for (int i = 0; i < n; ++i)
    for (const auto& [col, w] : vectors.rows[i]) postings[col].emplace_back(i, w);

  KnnGraph graph;
  graph.k = k;
  graph.neighbors.resize(n);

  std::vector<double> sim(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    std::fill(sim.begin(), sim.end(), 0.0);
    for (const auto& [col, w] : vectors.rows[i])
      for (const auto& [doc, pw] : postings[col]) sim[doc] += w * pw;

    int cnt = 0;
    for (int d = 0; d < n; ++d)
      if (d != i) order[cnt++] = d;
    auto better = [&](int a, int b) {
      return sim[a] != sim[b] ? sim[a] > sim[b] : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + k, order.begin() + cnt, better);

    graph.neighbors[i].reserve(k);
    for (int t = 0; t < k; ++t)
      graph.neighbors[i].push_back(KnnGraph::Neighbor{order[t], sim[order[t]]});
  }
  return graph;
}

PairSource mknn_pairs(const KnnGraph& graph) {
  const int n = static_cast<int>(graph.neighbors.size());
  std::vector<std::unordered_set<int>> in_list(n);
  for (int i = 0; i < n; ++i)
    for (const auto& nb : graph.neighbors[i]) in_list[i].insert(nb.doc);

  PairSource src;
  src.n = n;
  src.name = "mknn";
  for (int i = 0; i < n; ++i)
    for (const auto& nb : graph.neighbors[i])
      if (nb.doc > i && in_list[nb.doc].count(i))
        src.entries.push_back(PairEntry{i, nb.doc, +1});
  std::sort(src.entries.begin(), src.entries.end(),
            [](const PairEntry& a, const PairEntry& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  src.validate();
  return src;
}

PairSource keymatch_pairs(const Corpus& corpus, const std::string& pattern) {
  std::regex re;
  try {
    re = std::regex(pattern);
  } catch (const std::regex_error& e) {
    throw std::runtime_error("keymatch_pairs: invalid pattern '" + pattern +
                             "': " + e.what());
  }

  std::map<std::string, std::vector<int>> groups;
  for (int i = 0; i < corpus.n(); ++i) {
    std::smatch match;
    if (!std::regex_search(corpus.docs[i], match, re)) continue;
    std::string key = match.str(0);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    groups[key].push_back(i);
  }

  PairSource src;
  src.n = std::max(corpus.n(), 1);
  src.name = "keymatch";
  for (const auto& [key, members] : groups)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        src.entries.push_back(PairEntry{members[a], members[b], +1});
  std::sort(src.entries.begin(), src.entries.end(),
            [](const PairEntry& a, const PairEntry& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  src.validate();
  return src;
}

PairStats pair_stats(const PairSource& pairs, const Labeling& truth) {
  pairs.validate();
  if (truth.n() != pairs.n)
    throw std::invalid_argument("pair_stats: truth has n = " +
                                std::to_string(truth.n()) +
                                ", pairs have n = " + std::to_string(pairs.n));

  PairStats stats;
  stats.unique_pairs = static_cast<long long>(pairs.entries.size());
  stats.degrees.assign(pairs.n, 0);
  long long correct = 0;
  for (const PairEntry& e : pairs.entries) {
    ++stats.degrees[e.i];
    ++stats.degrees[e.j];
    const bool same = truth.y[e.i] == truth.y[e.j];
    if ((same && e.value == 1) || (!same && e.value == -1)) ++correct;
  }
  stats.accuracy = pairs.entries.empty()
                       ? 0.0
                       : static_cast<double>(correct) /
                             static_cast<double>(pairs.entries.size());
  return stats;
}

}  // namespace pairlabel
