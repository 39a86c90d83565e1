// scoring.hpp
// Fractional institution credit per venue-year under the contest rules:
// each accepted paper has one unit of credit, split equally over its authors,
// and each author's share split equally over that author's institutions.
// Unaffiliated authors keep their slot in the per-paper split; their share
// simply reaches no institution.

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "rankins/corpus.hpp"
#include "rankins/errors.hpp"
#include "rankins/tsv.hpp"
#include "rankins/util.hpp"

namespace rankins {

// Per-institution credit of one paper (tracked and untracked alike).
// Credits sum to <= 1; the shortfall is the unaffiliated authors' share.
inline std::vector<std::pair<std::string, double>> paper_institution_credit(
    const PaperRecord& paper) {
  std::vector<std::pair<std::string, double>> credit;
  const double author_share = 1.0 / static_cast<double>(paper.authorships.size());
  for (const auto& a : paper.authorships) {
    if (a.institutions.empty()) continue;
    const double inst_share =
        author_share / static_cast<double>(a.institutions.size());
    for (const auto& inst : a.institutions) {
      auto it = std::find_if(credit.begin(), credit.end(),
                             [&](const auto& e) { return e.first == inst; });
      if (it == credit.end()) {
        credit.emplace_back(inst, inst_share);
      } else {
        it->second += inst_share;
      }
    }
  }
  return credit;
}

// Ranking scores of one venue-year: institution -> fraction of papers.
// Institutions with zero credit are simply absent; score_of returns 0.
class ScoreTable {
 public:
  ScoreTable() = default;
  ScoreTable(std::string venue_id, int year,
             std::map<std::string, double> scores, std::size_t paper_count)
      : venue_id_(std::move(venue_id)),
        year_(year),
        scores_(std::move(scores)),
        paper_count_(paper_count) {}

  const std::string& venue_id() const { return venue_id_; }
  int year() const { return year_; }
  std::size_t paper_count() const { return paper_count_; }
  const std::map<std::string, double>& scores() const { return scores_; }

  double score_of(const std::string& inst) const {
    auto it = scores_.find(inst);
    return it == scores_.end() ? 0.0 : it->second;
  }

  bool all_zero() const { return scores_.empty(); }

 private:
  std::string venue_id_;
  int year_ = 0;
  std::map<std::string, double> scores_;
  std::size_t paper_count_ = 0;
};

// Predicted or true relevance per tracked institution for one venue-year.
struct RelevanceVector {
  std::string venue_id;
  int target_year = 0;
  std::map<std::string, double> values;  // covers exactly the tracked set

  double value_of(const std::string& inst) const {
    auto it = values.find(inst);
    if (it == values.end())
      throw MismatchError("institution absent from relevance vector: " + inst);
    return it->second;
  }
};

// Accumulates fractional credit of one venue inside a year slice and
// normalizes by the venue-year paper count. Only tracked institutions are
// kept in the table; untracked credit reduces the tracked sum below 1.
inline ScoreTable compute_scores(const YearSlice& slice,
                                 const std::string& venue,
                                 const Corpus& corpus) {
  std::map<std::string, double> credit;
  std::size_t paper_count = 0;
  for (const auto& p : slice.papers) {
    if (p.venue_id != venue) continue;
    ++paper_count;
    for (const auto& [inst, c] : paper_institution_credit(p)) {
      if (corpus.is_tracked(inst)) credit[inst] += c;
    }
  }
  if (paper_count > 0) {
    for (auto& [inst, c] : credit) c /= static_cast<double>(paper_count);
  }
  return ScoreTable(venue, slice.year, std::move(credit), paper_count);
}

// Score tables of one venue across all years of the corpus.
inline std::map<int, ScoreTable> score_history(const Corpus& corpus,
                                               const std::string& venue) {
  std::map<int, ScoreTable> tables;
  for (const auto& [year, slice] : partition_by_year(corpus)) {
    tables.emplace(year, compute_scores(slice, venue, corpus));
  }
  return tables;
}

// Relevance vector over the tracked set read off a score table.
inline RelevanceVector relevance_from_table(const ScoreTable& table,
                                            const Corpus& corpus,
                                            int target_year) {
  RelevanceVector rel;
  rel.venue_id = table.venue_id();
  rel.target_year = target_year;
  for (const auto& inst : corpus.tracked_institutions()) {
    rel.values.emplace(inst, table.score_of(inst));
  }
  return rel;
}

// PreviousYear baseline: the target-year prediction is the year-(t-1) score
// table verbatim.
inline RelevanceVector previous_year_baseline(
    const std::map<int, ScoreTable>& tables, const std::string& venue,
    int target_year, const Corpus& corpus) {
  auto it = tables.find(target_year - 1);
  if (it == tables.end()) {
    throw MissingHistoryError("no score table for venue " + venue + ", year " +
                              std::to_string(target_year - 1));
  }
  return relevance_from_table(it->second, corpus, target_year);
}

// TSV export: [venue_id, year, institution_id, score], descending score,
// ties by ascending institution id.
inline void export_score_table(const ScoreTable& table,
                               const std::string& path) {
  std::vector<std::pair<std::string, double>> rows(table.scores().begin(),
                                                   table.scores().end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  TsvWriter w(path);
  for (const auto& [inst, score] : rows) {
    w.row({table.venue_id(), std::to_string(table.year()), inst,
           format_double(score)});
  }
}

}  // namespace rankins
