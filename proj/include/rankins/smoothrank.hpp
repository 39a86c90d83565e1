// smoothrank.hpp
// Next-year relevance as a geometrically decaying weighted sum of the four
// preceding score tables. The decay weight is grid searched to maximize
// NDCG@cutoff on the most recent held-out year; ties resolve to the larger
// weight (the ">=" update walking an ascending grid).

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "rankins/errors.hpp"
#include "rankins/metrics.hpp"
#include "rankins/scoring.hpp"

namespace rankins {

// Candidate decay weights [1/g, 2/g, ..., 1], default g = 20.
struct SmoothingGrid {
  std::vector<double> weights;

  static SmoothingGrid make(std::size_t size = 20) {
    if (size == 0) throw ArgumentError("smoothing grid must be non-empty");
    SmoothingGrid grid;
    grid.weights.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
      grid.weights[i] = static_cast<double>(i + 1) / static_cast<double>(size);
    }
    return grid;
  }
};

struct RankIns1Result {
  RelevanceVector relevance;  // normalized to sum 1
  double chosen_weight = 1.0;
  double validation_ndcg = 0.0;
};

namespace detail {

// r^{y}(inst), with absent years acting as all-zero tables.
inline double history_score(const std::map<int, ScoreTable>& history, int year,
                            const std::string& inst) {
  auto it = history.find(year);
  return it == history.end() ? 0.0 : it->second.score_of(inst);
}

// s(inst) = r^{base} + w r^{base-1} + w^2 r^{base-2} + w^3 r^{base-3}
inline std::map<std::string, double> smoothed_scores(
    const std::map<int, ScoreTable>& history, int base_year, double w,
    const std::vector<std::string>& institutions) {
  std::map<std::string, double> scores;
  const double w2 = w * w;
  const double w3 = w2 * w;
  for (const auto& inst : institutions) {
    scores[inst] = history_score(history, base_year, inst) +
                   w * history_score(history, base_year - 1, inst) +
                   w2 * history_score(history, base_year - 2, inst) +
                   w3 * history_score(history, base_year - 3, inst);
  }
  return scores;
}

}  // namespace detail

// history: year -> ScoreTable of one venue, covering target_year-5 ..
// target_year-1 (missing years contribute zero). The grid search scores
// candidates against the held-out year target_year-1; the final prediction
// smooths years target_year-1 .. target_year-4 with the chosen weight and
// normalizes to sum 1.
inline RankIns1Result rankins1(const std::map<int, ScoreTable>& history,
                               const std::string& venue,
                               const Corpus& corpus, int target_year,
                               std::size_t cutoff = 20,
                               const SmoothingGrid& grid =
                                   SmoothingGrid::make()) {
  const auto& institutions = corpus.tracked_institutions();

  RelevanceVector held_out;
  held_out.venue_id = venue;
  held_out.target_year = target_year - 1;
  for (const auto& inst : institutions) {
    held_out.values.emplace(
        inst, detail::history_score(history, target_year - 1, inst));
  }

  double w_opt = 1.0;
  double max_score = 0.0;
  for (double w : grid.weights) {
    auto candidate =
        detail::smoothed_scores(history, target_year - 2, w, institutions);
    double score =
        ndcg_at(Ranking::from_scores(candidate), held_out, cutoff);
    if (score >= max_score) {
      max_score = score;
      w_opt = w;
    }
  }

  auto final_scores =
      detail::smoothed_scores(history, target_year - 1, w_opt, institutions);
  double sum = 0.0;
  for (const auto& [inst, s] : final_scores) sum += s;
  if (!(sum > 0.0)) {
    throw DegenerateHistoryError(
        "venue " + venue + ": no non-zero history in years " +
        std::to_string(target_year - 5) + ".." +
        std::to_string(target_year - 1) + ", cannot normalize");
  }

  RankIns1Result result;
  result.chosen_weight = w_opt;
  result.validation_ndcg = max_score;
  result.relevance.venue_id = venue;
  result.relevance.target_year = target_year;
  for (auto& [inst, s] : final_scores) {
    result.relevance.values.emplace(inst, s / sum);
  }
  return result;
}

}  // namespace rankins
