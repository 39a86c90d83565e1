// pipeline.hpp
// End-to-end orchestration of the matrix-based ranker and the validation
// protocol: for every planned venue and method, predict the validation year
// from strictly earlier data and score NDCG@cutoff against the true table.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rankins/corpus.hpp"
#include "rankins/errors.hpp"
#include "rankins/featspace.hpp"
#include "rankins/forest.hpp"
#include "rankins/metrics.hpp"
#include "rankins/scoring.hpp"
#include "rankins/smoothrank.hpp"
#include "rankins/temporal.hpp"
#include "rankins/util.hpp"

namespace rankins {

struct RankIns2Config {
  std::size_t clusters = 500;  // K, clamped to the fitted author count
  TemporalConfig temporal;
  ForestConfig forest;         // forest.seed is overridden by the master seed
  bool per_venue_model = false;
  std::uint64_t seed = 1;      // fans out to clustering and forest seeds
  std::size_t threads = 1;
};

struct RankIns2Result {
  RelevanceVector relevance;
  WeightVector weights{};      // learned year weights for the queried venue
  std::size_t cluster_count = 0;
  std::size_t topic_count = 0;
};

// Shared state of one target-year run: feature space fitted at the training
// cutoff (target_year - 1), data matrices per venue-year, and the shared
// regression model. Reusable across venues so a validation run fits the
// expensive pieces once.
class RankIns2Runner {
 public:
  RankIns2Runner(const Corpus& corpus, int target_year,
                 const RankIns2Config& config,
                 std::vector<std::string> training_venues = {})
      : corpus_(corpus), target_year_(target_year), config_(config) {
    const int cutoff_year = target_year - 1;
    const int oldest =
        target_year - 4 - static_cast<int>(config.temporal.iterations);
    if (corpus.empty() || corpus.min_year() > oldest ||
        corpus.max_year() < cutoff_year) {
      std::string missing;
      for (int y = oldest; y <= cutoff_year; ++y) {
        if (corpus.empty() || y < corpus.min_year() || y > corpus.max_year()) {
          missing += (missing.empty() ? "" : ", ") + std::to_string(y);
        }
      }
      throw MissingHistoryError(
          "corpus does not cover the training years; missing: " + missing);
    }

    // Venues absent from the corpus are dropped here; querying them later
    // fails per venue instead of failing the whole run.
    for (const auto& venue : training_venues) {
      if (corpus.has_venue(venue)) venues_.push_back(venue);
    }
    if (training_venues.empty()) {
      for (const auto& [venue, abbrev] : corpus.venues()) {
        (void)abbrev;
        venues_.push_back(venue);
      }
    }
    if (venues_.empty()) {
      throw ReferentialError("none of the requested venues exist in the corpus");
    }
    std::sort(venues_.begin(), venues_.end());
    venues_.erase(std::unique(venues_.begin(), venues_.end()), venues_.end());

    topics_ = TopicModel::fit(corpus, cutoff_year);
    clustering_ = AuthorClustering::fit(
        corpus, topics_, config.clusters,
        derive_seed(config.seed, 0x636c7573746572ULL));

    auto slices = partition_by_year(corpus);
    for (int y = oldest; y <= cutoff_year; ++y) {
      EntityVectors vectors =
          build_all_vectors(corpus, y, clustering_, topics_);
      auto slice_it = slices.find(y);
      const YearSlice empty_slice{y, {}};
      const YearSlice& slice =
          slice_it == slices.end() ? empty_slice : slice_it->second;
      for (const auto& venue : venues_) {
        matrices_[venue].emplace(
            y, build_data_matrix(venue, y, vectors.institutions,
                                 vectors.venues.at(venue)));
        scores_[venue].emplace(y, compute_scores(slice, venue, corpus));
      }
    }
  }

  const std::vector<std::string>& training_venues() const { return venues_; }
  std::size_t cluster_count() const { return clustering_.cluster_count(); }
  std::size_t topic_count() const { return topics_.size(); }

  RankIns2Result predict(const std::string& venue) {
    if (!matrices_.count(venue)) {
      throw ReferentialError("venue not part of this run: " + venue);
    }
    const int cutoff_year = target_year_ - 1;
    const auto& venue_matrices = matrices_.at(venue);

    WeightVector w;
    try {
      w = learn_weights(venue_matrices, cutoff_year, config_.temporal);
    } catch (const MissingHistoryError& e) {
      throw MissingHistoryError(std::string("weight learning: ") + e.what());
    } catch (const SingularSystemError& e) {
      throw SingularSystemError(std::string("weight learning: ") + e.what(),
                                e.condition_estimate);
    }

    DataMatrix synthesized =
        synthesize_matrix(w, venue_matrices.at(cutoff_year),
                          venue_matrices.at(cutoff_year - 1),
                          venue_matrices.at(cutoff_year - 2));

    const ForestModel& model = model_for(venue);
    RankIns2Result result;
    result.relevance = model.predict(synthesized, corpus_, target_year_);
    result.weights = w;
    result.cluster_count = clustering_.cluster_count();
    result.topic_count = topics_.size();
    return result;
  }

 private:
  const ForestModel& model_for(const std::string& venue) {
    const std::string key = config_.per_venue_model ? venue : std::string();
    auto it = models_.find(key);
    if (it != models_.end()) return it->second;

    TrainingSet data;
    for (const auto& v : venues_) {
      if (config_.per_venue_model && v != venue) continue;
      const auto& venue_matrices = matrices_.at(v);
      for (const auto& [year, matrix] : venue_matrices) {
        const ScoreTable& table = scores_.at(v).at(year);
        for (std::size_t i = 0; i < matrix.rows; ++i) {
          TrainingRow row;
          row.venue_id = v;
          row.year = year;
          row.institution_id = corpus_.tracked_institutions()[i];
          row.features.assign(matrix.data.begin() + i * matrix.cols,
                              matrix.data.begin() + (i + 1) * matrix.cols);
          row.target = table.score_of(row.institution_id);
          data.rows.push_back(std::move(row));
        }
      }
    }
    ForestConfig fc = config_.forest;
    fc.seed = derive_seed(config_.seed, 0x666f72657374ULL);
    try {
      auto [pos, inserted] =
          models_.emplace(key, ForestModel::train(data, fc, config_.threads));
      (void)inserted;
      return pos->second;
    } catch (const TrainingError& e) {
      throw TrainingError(std::string("regression training: ") + e.what());
    }
  }

  const Corpus& corpus_;
  int target_year_;
  RankIns2Config config_;
  std::vector<std::string> venues_;
  TopicModel topics_;
  AuthorClustering clustering_;
  std::map<std::string, std::map<int, DataMatrix>> matrices_;
  std::map<std::string, std::map<int, ScoreTable>> scores_;
  std::map<std::string, ForestModel> models_;
};

// One-shot prediction for a single venue.
inline RankIns2Result rankins2(const Corpus& corpus, const std::string& venue,
                               int target_year, const RankIns2Config& config) {
  if (!corpus.has_venue(venue)) {
    throw ReferentialError("unknown venue: " + venue);
  }
  RankIns2Runner runner(corpus, target_year, config);
  return runner.predict(venue);
}

enum class Method { kPreviousYear, kRankIns1, kRankIns2, kOracle };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::kPreviousYear: return "previous-year";
    case Method::kRankIns1: return "rankins1";
    case Method::kRankIns2: return "rankins2";
    case Method::kOracle: return "oracle";
  }
  return "?";
}

inline std::optional<Method> method_from_name(const std::string& name) {
  if (name == "previous-year") return Method::kPreviousYear;
  if (name == "rankins1") return Method::kRankIns1;
  if (name == "rankins2") return Method::kRankIns2;
  if (name == "oracle") return Method::kOracle;
  return std::nullopt;
}

struct ExperimentPlan {
  std::vector<std::pair<int, std::vector<std::string>>> phases;
  int target_year = 0;
  int validation_year = 0;
  std::size_t cutoff = 20;

  static std::vector<std::pair<int, std::vector<std::string>>>
  default_phases() {
    return {{1, {"SIGIR", "SIGMOD", "SIGCOMM"}},
            {2, {"KDD", "ICML"}},
            {3, {"FSE", "MobiCom", "MM"}}};
  }

  static ExperimentPlan defaults(int validation_year, int target_year) {
    ExperimentPlan plan;
    plan.phases = default_phases();
    plan.validation_year = validation_year;
    plan.target_year = target_year;
    plan.check();
    return plan;
  }

  void check() const {
    if (validation_year >= target_year) {
      throw ConfigError("validation year must precede the target year");
    }
    if (cutoff == 0) throw ConfigError("cutoff must be >= 1");
    if (phases.empty()) throw ConfigError("plan has no venues");
  }

  std::vector<std::pair<int, std::string>> venue_list() const {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& [phase, venues] : phases) {
      for (const auto& v : venues) out.emplace_back(phase, v);
    }
    return out;
  }
};

struct EvaluationCell {
  int phase = 0;
  std::string venue_id;
  std::string method;
  bool ok = false;
  double ndcg = 0.0;
  std::vector<std::pair<std::string, double>> top;  // predicted top-cutoff
  std::string hyperparameters;
  std::vector<double> year_weights;  // rankins2 cells: learned w1..w3
  std::string error;
};

struct EvaluationReport {
  int validation_year = 0;
  std::size_t cutoff = 20;
  std::vector<EvaluationCell> cells;

  bool all_failed() const {
    for (const auto& c : cells) {
      if (c.ok) return false;
    }
    return !cells.empty();
  }
};

struct ValidationConfig {
  RankIns2Config rankins2;
  SmoothingGrid grid = SmoothingGrid::make();
  std::vector<Method> methods = {Method::kPreviousYear, Method::kRankIns1,
                                 Method::kRankIns2};
};

// Predicts plan.validation_year for every (venue, method) pair using only
// earlier years, then scores against the true validation-year table.
// Failures are recorded per cell; other cells still run.
inline EvaluationReport run_validation(const Corpus& corpus,
                                       const ExperimentPlan& plan,
                                       const ValidationConfig& config) {
  plan.check();
  EvaluationReport report;
  report.validation_year = plan.validation_year;
  report.cutoff = plan.cutoff;

  std::vector<std::string> plan_venues;
  for (const auto& [phase, venue] : plan.venue_list()) {
    (void)phase;
    plan_venues.push_back(venue);
  }

  std::optional<RankIns2Runner> runner;
  std::string runner_error;
  const bool wants_rankins2 =
      std::find(config.methods.begin(), config.methods.end(),
                Method::kRankIns2) != config.methods.end();
  if (wants_rankins2) {
    try {
      runner.emplace(corpus, plan.validation_year, config.rankins2,
                     plan_venues);
    } catch (const Error& e) {
      runner_error = e.what();
    }
  }

  for (const auto& [phase, venue] : plan.venue_list()) {
    std::map<int, ScoreTable> history;
    std::string history_error;
    try {
      if (!corpus.has_venue(venue)) {
        throw ReferentialError("unknown venue: " + venue);
      }
      history = score_history(corpus, venue);
    } catch (const Error& e) {
      history_error = e.what();
    }

    RelevanceVector truth;
    if (history_error.empty()) {
      auto it = history.find(plan.validation_year);
      const ScoreTable empty_table(venue, plan.validation_year, {}, 0);
      truth = relevance_from_table(
          it == history.end() ? empty_table : it->second, corpus,
          plan.validation_year);
    }

    for (Method method : config.methods) {
      EvaluationCell cell;
      cell.phase = phase;
      cell.venue_id = venue;
      cell.method = method_name(method);
      try {
        if (!history_error.empty()) throw Error(history_error);
        RelevanceVector predicted;
        switch (method) {
          case Method::kPreviousYear:
            predicted = previous_year_baseline(history, venue,
                                               plan.validation_year, corpus);
            break;
          case Method::kRankIns1: {
            RankIns1Result r = rankins1(history, venue, corpus,
                                        plan.validation_year, plan.cutoff,
                                        config.grid);
            predicted = r.relevance;
            cell.hyperparameters =
                "beta=" + format_double(r.chosen_weight) +
                ";train_ndcg=" + format_double(r.validation_ndcg);
            break;
          }
          case Method::kRankIns2: {
            if (!runner) throw Error(runner_error);
            RankIns2Result r = runner->predict(venue);
            predicted = r.relevance;
            cell.year_weights.assign(r.weights.begin(), r.weights.end());
            cell.hyperparameters =
                "w1=" + format_double(r.weights[0]) +
                ";w2=" + format_double(r.weights[1]) +
                ";w3=" + format_double(r.weights[2]) +
                ";u=" + std::to_string(config.rankins2.temporal.iterations) +
                ";K=" + std::to_string(r.cluster_count) +
                ";s=" + std::to_string(r.topic_count) +
                ";trees=" + std::to_string(config.rankins2.forest.n_trees);
            break;
          }
          case Method::kOracle:
            // Test aid: predicts the truth itself, NDCG 1.0 by construction.
            predicted = truth;
            break;
        }
        Ranking ranking = Ranking::from_scores(predicted.values);
        cell.ndcg = ndcg_at(ranking, truth, plan.cutoff);
        cell.top = ranking.top(plan.cutoff).entries();
        cell.ok = true;
      } catch (const Error& e) {
        cell.error = e.what();
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

inline std::string format_top_list(
    const std::vector<std::pair<std::string, double>>& top) {
  std::string out;
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (i) out += ';';
    out += top[i].first + ":" + format_double(top[i].second);
  }
  return out;
}

// Full report: [phase, venue, method, ndcg, top_list, hyperparameters,
// error]; failed cells carry "NA" in the ndcg column.
inline void export_report_tsv(const EvaluationReport& report,
                              const std::string& path) {
  TsvWriter w(path);
  for (const auto& c : report.cells) {
    w.row({std::to_string(c.phase), c.venue_id, c.method,
           c.ok ? format_double(c.ndcg) : "NA", format_top_list(c.top),
           c.hyperparameters, c.error});
  }
}

// Plot-ready CSV mirroring the report: venue,method,ndcg.
inline void export_report_csv(const EvaluationReport& report,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot open file for writing: " + path);
  out << "venue,method,ndcg\n";
  for (const auto& c : report.cells) {
    out << c.venue_id << ',' << c.method << ','
        << (c.ok ? format_double(c.ndcg) : "NA") << '\n';
  }
}

}  // namespace rankins
