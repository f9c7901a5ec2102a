// Bag-of-words document algebra: conditional term/document probabilities,
// the symmetrized relevance matrix R_{mu,nu} = (P(Q_mu|Q_nu)+P(Q_nu|Q_mu))/2,
// the row-stochastic similarity operator built from S = Q Q^T, and threshold
// clustering by connected components. Counts stay integers; only the final
// probabilities are doubles, so scaling a document's counts is exact.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pbn/errors.hpp"

namespace pbn {

// Sparse doc-by-term count matrix. Memory is proportional to the number of
// nonzero counts; postings give term-major access for pairwise work.
class SparseCorpus {
 public:
  struct Triple {
    std::string doc;
    std::string term;
    long long count;
  };

  static SparseCorpus from_triples(const std::vector<Triple>& triples) {
    SparseCorpus c;
    std::unordered_map<std::string, int> doc_index;
    std::unordered_map<std::string, int> term_index;
    std::map<std::pair<int, int>, long long> acc;
    for (const auto& t : triples) {
      if (t.count < 0) {
        throw ModelError("SparseCorpus: negative count for doc '" + t.doc +
                         "' term '" + t.term + "'");
      }
      auto [di, inserted_doc] = doc_index.try_emplace(
          t.doc, static_cast<int>(c.docs_.size()));
      if (inserted_doc) c.docs_.push_back(t.doc);
      auto [ti, inserted_term] = term_index.try_emplace(
          t.term, static_cast<int>(c.vocab_.size()));
      if (inserted_term) c.vocab_.push_back(t.term);
      acc[{di->second, ti->second}] += t.count;
    }
    c.doc_terms_.resize(c.docs_.size());
    c.postings_.resize(c.vocab_.size());
    c.totals_.assign(c.docs_.size(), 0);
    for (const auto& [key, count] : acc) {
      if (count == 0) continue;
      const auto [d, k] = key;
      c.doc_terms_[static_cast<std::size_t>(d)].push_back({k, count});
      c.postings_[static_cast<std::size_t>(k)].push_back({d, count});
      c.totals_[static_cast<std::size_t>(d)] += count;
    }
    for (std::size_t d = 0; d < c.docs_.size(); ++d) {
      if (c.totals_[d] == 0) {
        throw ModelError("SparseCorpus: document '" + c.docs_[d] +
                         "' has no positive counts");
      }
    }
    return c;
  }

  std::size_t doc_count() const { return docs_.size(); }
  std::size_t term_count() const { return vocab_.size(); }
  std::size_t nonzero_count() const {
    std::size_t n = 0;
    for (const auto& row : doc_terms_) n += row.size();
    return n;
  }
  const std::vector<std::string>& docs() const { return docs_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

  int doc_index(const std::string& id) const {
    for (std::size_t i = 0; i < docs_.size(); ++i) {
      if (docs_[i] == id) return static_cast<int>(i);
    }
    throw DimensionError("SparseCorpus: unknown document '" + id + "'");
  }
  int term_index(const std::string& id) const {
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      if (vocab_[i] == id) return static_cast<int>(i);
    }
    throw DimensionError("SparseCorpus: unknown term '" + id + "'");
  }

  // (term index, count) pairs sorted by term index.
  const std::vector<std::pair<int, long long>>& doc_terms(int d) const {
    return doc_terms_.at(static_cast<std::size_t>(d));
  }
  // (doc index, count) pairs sorted by doc index.
  const std::vector<std::pair<int, long long>>& postings(int k) const {
    return postings_.at(static_cast<std::size_t>(k));
  }
  long long total(int d) const {
    return totals_.at(static_cast<std::size_t>(d));
  }
  long long count(int d, int k) const {
    const auto& row = doc_terms(d);
    auto it = std::lower_bound(
        row.begin(), row.end(), k,
        [](const std::pair<int, long long>& e, int key) { return e.first < key; });
    return (it != row.end() && it->first == k) ? it->second : 0;
  }

 private:
  std::vector<std::string> docs_;
  std::vector<std::string> vocab_;
  std::vector<std::vector<std::pair<int, long long>>> doc_terms_;
  std::vector<std::vector<std::pair<int, long long>>> postings_;
  std::vector<long long> totals_;
};

// TSV triples: doc<TAB>term<TAB>count, '#' comment lines ignored.
inline SparseCorpus ingest(std::istream& in, const std::string& source) {
  std::vector<SparseCorpus::Triple> triples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto where = source + ":" + std::to_string(line_no);
    const auto tab1 = line.find('\t');
    const auto tab2 = (tab1 == std::string::npos)
                          ? std::string::npos
                          : line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos) {
      throw ParseError(where + ": expected doc<TAB>term<TAB>count");
    }
    const std::string doc = line.substr(0, tab1);
    const std::string term = line.substr(tab1 + 1, tab2 - tab1 - 1);
    const std::string count_field = line.substr(tab2 + 1);
    if (doc.empty() || term.empty()) {
      throw ParseError(where + ": empty doc or term id");
    }
    long long count = 0;
    std::size_t used = 0;
    try {
      count = std::stoll(count_field, &used);
    } catch (const std::exception&) {
      throw ParseError(where + ": bad count '" + count_field + "'");
    }
    if (used != count_field.size() || count < 0) {
      throw ParseError(where + ": bad count '" + count_field + "'");
    }
    triples.push_back({doc, term, count});
  }
  if (triples.empty()) {
    throw ParseError(source + ": no data lines");
  }
  return SparseCorpus::from_triples(triples);
}

inline SparseCorpus ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open corpus file '" + path + "'");
  }
  return ingest(in, path);
}

// P(k|Q_mu) = q_{mu,k} / sum_k q_{mu,k}
inline double term_given_doc(const SparseCorpus& c, int k, int mu) {
  if (mu < 0 || mu >= static_cast<int>(c.doc_count())) {
    throw DimensionError("term_given_doc: doc index out of range");
  }
  if (k < 0 || k >= static_cast<int>(c.term_count())) {
    throw DimensionError("term_given_doc: term index out of range");
  }
  return static_cast<double>(c.count(mu, k)) /
         static_cast<double>(c.total(mu));
}

inline double term_given_doc(const SparseCorpus& c, const std::string& term,
                             const std::string& doc) {
  return term_given_doc(c, c.term_index(term), c.doc_index(doc));
}

// P(Q_mu|Q_nu) = sum over terms present in mu of P(k|Q_nu). Membership is
// strict positivity of the count.
inline double doc_given_doc(const SparseCorpus& c, int mu, int nu) {
  if (mu < 0 || mu >= static_cast<int>(c.doc_count()) || nu < 0 ||
      nu >= static_cast<int>(c.doc_count())) {
    throw DimensionError("doc_given_doc: doc index out of range");
  }
  const auto& a = c.doc_terms(mu);
  const auto& b = c.doc_terms(nu);
  long long shared = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      shared += b[j].second;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(shared) / static_cast<double>(c.total(nu));
}

inline double doc_given_doc(const SparseCorpus& c, const std::string& mu,
                            const std::string& nu) {
  return doc_given_doc(c, c.doc_index(mu), c.doc_index(nu));
}

// Symmetric, unit diagonal; only pairs sharing a term are stored.
class RelevanceMatrix {
 public:
  RelevanceMatrix(std::vector<std::string> docs,
                  std::map<std::pair<int, int>, double> upper)
      : docs_(std::move(docs)), upper_(std::move(upper)) {}

  std::size_t size() const { return docs_.size(); }
  const std::vector<std::string>& docs() const { return docs_; }
  const std::map<std::pair<int, int>, double>& off_diagonal() const {
    return upper_;
  }

  double entry(int mu, int nu) const {
    if (mu == nu) return 1.0;
    const auto key = std::minmax(mu, nu);
    auto it = upper_.find({key.first, key.second});
    return it == upper_.end() ? 0.0 : it->second;
  }

  Eigen::MatrixXd to_dense() const {
    const auto n = static_cast<Eigen::Index>(docs_.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (const auto& [key, value] : upper_) {
      m(key.first, key.second) = value;
      m(key.second, key.first) = value;
    }
    return m;
  }

 private:
  std::vector<std::string> docs_;
  std::map<std::pair<int, int>, double> upper_;  // keys mu < nu
};

// Walks each term's posting list once, accumulating for every ordered pair
// (mu, nu) sharing the term the count q_{nu,k}; dividing by the totals gives
// both conditionals of Eq-free form P(Q_mu|Q_nu) = shared_nu / T_nu.
inline RelevanceMatrix relevance(const SparseCorpus& c) {
  std::map<std::pair<int, int>, std::pair<long long, long long>> shared;
  for (int k = 0; k < static_cast<int>(c.term_count()); ++k) {
    const auto& post = c.postings(k);
    for (std::size_t i = 0; i < post.size(); ++i) {
      for (std::size_t j = i + 1; j < post.size(); ++j) {
        auto& cell = shared[{post[i].first, post[j].first}];
        cell.first += post[j].second;   // counts from nu, for P(Q_mu|Q_nu)
        cell.second += post[i].second;  // counts from mu, for P(Q_nu|Q_mu)
      }
    }
  }
  std::map<std::pair<int, int>, double> upper;
  for (const auto& [key, cell] : shared) {
    const auto [mu, nu] = key;
    const double p_mu_given_nu =
        static_cast<double>(cell.first) / static_cast<double>(c.total(nu));
    const double p_nu_given_mu =
        static_cast<double>(cell.second) / static_cast<double>(c.total(mu));
    upper[key] = 0.5 * (p_mu_given_nu + p_nu_given_mu);
  }
  return RelevanceMatrix(c.docs(), std::move(upper));
}

// S = Q Q^T over integer counts; R divides each row of S by its sum.
class RowStochasticSimilarity {
 public:
  RowStochasticSimilarity(std::vector<std::string> docs,
                          std::vector<long long> diagonal,
                          std::map<std::pair<int, int>, long long> upper)
      : docs_(std::move(docs)),
        diagonal_(std::move(diagonal)),
        upper_(std::move(upper)) {
    row_sums_.assign(docs_.size(), 0);
    for (std::size_t i = 0; i < docs_.size(); ++i) row_sums_[i] = diagonal_[i];
    for (const auto& [key, value] : upper_) {
      row_sums_[static_cast<std::size_t>(key.first)] += value;
      row_sums_[static_cast<std::size_t>(key.second)] += value;
    }
  }

  std::size_t size() const { return docs_.size(); }
  const std::vector<std::string>& docs() const { return docs_; }

  long long similarity(int i, int j) const {
    if (i == j) return diagonal_.at(static_cast<std::size_t>(i));
    const auto key = std::minmax(i, j);
    auto it = upper_.find({key.first, key.second});
    return it == upper_.end() ? 0 : it->second;
  }

  long long row_sum(int i) const {
    return row_sums_.at(static_cast<std::size_t>(i));
  }

  double markov_entry(int i, int j) const {
    return static_cast<double>(similarity(i, j)) /
           static_cast<double>(row_sum(i));
  }

  Eigen::MatrixXd similarity_dense() const {
    const auto n = static_cast<Eigen::Index>(docs_.size());
    Eigen::MatrixXd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        s(i, j) = static_cast<double>(similarity(static_cast<int>(i),
                                                 static_cast<int>(j)));
      }
    }
    return s;
  }

  Eigen::MatrixXd markov_dense() const {
    const auto n = static_cast<Eigen::Index>(docs_.size());
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        r(i, j) = markov_entry(static_cast<int>(i), static_cast<int>(j));
      }
    }
    return r;
  }

 private:
  std::vector<std::string> docs_;
  std::vector<long long> diagonal_;
  std::map<std::pair<int, int>, long long> upper_;  // keys i < j
  std::vector<long long> row_sums_;
};

inline RowStochasticSimilarity row_stochastic(const SparseCorpus& c) {
  std::vector<long long> diagonal(c.doc_count(), 0);
  std::map<std::pair<int, int>, long long> upper;
  for (int k = 0; k < static_cast<int>(c.term_count()); ++k) {
    const auto& post = c.postings(k);
    for (std::size_t i = 0; i < post.size(); ++i) {
      diagonal[static_cast<std::size_t>(post[i].first)] +=
          post[i].second * post[i].second;
      for (std::size_t j = i + 1; j < post.size(); ++j) {
        upper[{post[i].first, post[j].first}] +=
            post[i].second * post[j].second;
      }
    }
  }
  return RowStochasticSimilarity(c.docs(), std::move(diagonal),
                                 std::move(upper));
}

// Connected components of the graph with an edge wherever R >= threshold.
// Clusters are listed by smallest member index; members sorted ascending.
struct Clustering {
  std::vector<std::vector<int>> clusters;
  double threshold;
};

inline Clustering cluster(const RelevanceMatrix& r, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    throw ConfigError("cluster: threshold must lie in (0, 1)");
  }
  const int n = static_cast<int>(r.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& [key, value] : r.off_diagonal()) {
    if (value >= threshold) {
      const int a = find(key.first);
      const int b = find(key.second);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  Clustering out;
  out.threshold = threshold;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.clusters.push_back(std::move(members));
  }
  return out;
}

}  // namespace pbn
