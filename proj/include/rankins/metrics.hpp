// metrics.hpp
// DCG@n and NDCG@n. DCG reads the true relevance off the predicted order;
// IDCG is the DCG of the truth sorted descending. IDCG = 0 yields 0.0.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rankins/errors.hpp"
#include "rankins/scoring.hpp"

namespace rankins {

// An ordered prediction: institutions with predicted scores, best first.
class Ranking {
 public:
  using Entry = std::pair<std::string, double>;

  // Canonical ranking from a score map: descending score, ties broken by
  // ascending institution id.
  static Ranking from_scores(const std::map<std::string, double>& scores) {
    std::vector<Entry> entries(scores.begin(), scores.end());
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    return Ranking(std::move(entries));
  }

  // A caller-supplied order (e.g. a prediction file). The order is taken as
  // given; only duplicates are rejected.
  static Ranking from_ordered(std::vector<Entry> entries) {
    return Ranking(std::move(entries));
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  Ranking top(std::size_t n) const {
    std::vector<Entry> head(entries_.begin(),
                            entries_.begin() + std::min(n, entries_.size()));
    return Ranking(std::move(head));
  }

 private:
  explicit Ranking(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& [inst, score] : entries_) {
      (void)score;
      if (!seen.insert(inst).second)
        throw MismatchError("duplicate institution in ranking: " + inst);
    }
  }

  std::vector<Entry> entries_;
};

// DCG@n of relevance values already laid out in predicted order:
// sum_{i=1..min(n,len)} rel_i / log2(i+1).
inline double dcg_at(const std::vector<double>& relevances_in_predicted_order,
                     std::size_t n) {
  if (n == 0) throw ArgumentError("dcg cutoff must be >= 1");
  double dcg = 0.0;
  const std::size_t limit = std::min(n, relevances_in_predicted_order.size());
  for (std::size_t i = 0; i < limit; ++i) {
    dcg += relevances_in_predicted_order[i] /
           std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

inline double ideal_dcg_at(const RelevanceVector& truth, std::size_t n) {
  std::vector<double> rel;
  rel.reserve(truth.values.size());
  for (const auto& [inst, v] : truth.values) rel.push_back(v);
  std::sort(rel.begin(), rel.end(), std::greater<double>());
  return dcg_at(rel, n);
}

inline double ndcg_at(const Ranking& predicted, const RelevanceVector& truth,
                      std::size_t n) {
  if (n == 0) throw ArgumentError("ndcg cutoff must be >= 1");
  std::vector<double> rel;
  rel.reserve(predicted.size());
  for (const auto& [inst, score] : predicted.entries()) {
    (void)score;
    rel.push_back(truth.value_of(inst));  // MismatchError if absent
  }
  const double idcg = ideal_dcg_at(truth, n);
  if (idcg == 0.0) return 0.0;
  return dcg_at(rel, n) / idcg;
}

}  // namespace rankins
