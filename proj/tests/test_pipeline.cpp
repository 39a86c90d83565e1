#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "rankins/pipeline.hpp"
#include "rankins/synth.hpp"

using namespace rankins;

namespace {

SynthConfig small_corpus_config() {
  SynthConfig cfg;
  cfg.m = 20;
  cfg.n_venues = 2;
  cfg.year_min = 2009;
  cfg.year_max = 2016;
  cfg.papers_per_venue_year = 250;
  cfg.author_pool = 240;
  cfg.vocab_size = 30;
  cfg.drift = 0.0;
  return cfg;
}

RankIns2Config fast_config(std::uint64_t seed) {
  RankIns2Config cfg;
  cfg.seed = seed;
  return cfg;  // paper defaults otherwise: K=500, u=2, lambda=200
}

double rankins2_ndcg_vs_truth(std::uint64_t seed) {
  Corpus corpus = generate_synthetic(small_corpus_config(), seed);
  RankIns2Result result = rankins2(corpus, "V01", 2016, fast_config(seed));
  ScoreTable truth_table =
      compute_scores(partition_by_year(corpus).at(2016), "V01", corpus);
  RelevanceVector truth = relevance_from_table(truth_table, corpus, 2016);
  return ndcg_at(Ranking::from_scores(result.relevance.values), truth, 20);
}

}  // namespace

TEST_CASE("stationary corpora are predicted accurately") {
  // Drift-free shares make the target learnable; check the median over ten
  // generator seeds.
  std::vector<double> scores;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    scores.push_back(rankins2_ndcg_vs_truth(seed));
  }
  std::sort(scores.begin(), scores.end());
  const double median = 0.5 * (scores[4] + scores[5]);
  INFO("scores: ", scores[0], " .. ", scores[9], " median ", median);
  CHECK(median >= 0.9);
}

TEST_CASE("insufficient year coverage names the missing year") {
  // Target 2016 with u = 2 needs 2010..2015; the corpus starts at 2011, so
  // the sixth year back is the one reported.
  SynthConfig cfg = small_corpus_config();
  cfg.year_min = 2011;
  cfg.year_max = 2015;
  cfg.papers_per_venue_year = 20;
  Corpus corpus = generate_synthetic(cfg, 3);
  try {
    rankins2(corpus, "V01", 2016, fast_config(3));
    FAIL("expected MissingHistoryError");
  } catch (const MissingHistoryError& e) {
    CHECK(std::string(e.what()).find("2010") != std::string::npos);
  }
}

TEST_CASE("single tracked institution still works") {
  SynthConfig cfg = small_corpus_config();
  cfg.m = 1;
  cfg.papers_per_venue_year = 30;
  cfg.author_pool = 10;
  Corpus corpus = generate_synthetic(cfg, 5);
  RankIns2Result result = rankins2(corpus, "V01", 2016, fast_config(5));
  CHECK(result.relevance.values.size() == 1);
  CHECK(result.relevance.values.count("I0001") == 1);
}

TEST_CASE("unknown venue is rejected") {
  SynthConfig cfg = small_corpus_config();
  cfg.papers_per_venue_year = 20;
  Corpus corpus = generate_synthetic(cfg, 7);
  CHECK_THROWS_AS(rankins2(corpus, "NOPE", 2016, fast_config(7)),
                  ReferentialError);
}

TEST_CASE("validation report has one cell per venue and method") {
  SynthConfig cfg = small_corpus_config();
  cfg.papers_per_venue_year = 60;
  Corpus corpus = generate_synthetic(cfg, 9);

  ExperimentPlan plan;
  plan.phases = {{1, {"V01"}}};
  plan.validation_year = 2015;
  plan.target_year = 2016;

  ValidationConfig vcfg;
  vcfg.rankins2 = fast_config(9);
  EvaluationReport report = run_validation(corpus, plan, vcfg);
  REQUIRE(report.cells.size() == 3);
  for (const auto& cell : report.cells) {
    INFO(cell.method, ": ", cell.error);
    CHECK(cell.ok);
    CHECK(cell.ndcg >= 0.0);
    CHECK(cell.ndcg <= 1.0);
    CHECK_FALSE(cell.top.empty());
  }
  CHECK(report.cells[0].method == "previous-year");
  CHECK(report.cells[1].method == "rankins1");
  CHECK(report.cells[2].method == "rankins2");
}

TEST_CASE("the injected oracle method scores exactly one") {
  SynthConfig cfg = small_corpus_config();
  cfg.papers_per_venue_year = 60;
  Corpus corpus = generate_synthetic(cfg, 11);

  ExperimentPlan plan;
  plan.phases = {{1, {"V01", "V02"}}};
  plan.validation_year = 2015;
  plan.target_year = 2016;

  ValidationConfig vcfg;
  vcfg.methods = {Method::kOracle};
  EvaluationReport report = run_validation(corpus, plan, vcfg);
  REQUIRE(report.cells.size() == 2);
  for (const auto& cell : report.cells) {
    CHECK(cell.ok);
    CHECK(cell.ndcg == 1.0);
  }
}

TEST_CASE("default eight-venue plan fills every cell within bounds") {
  SynthConfig cfg;
  cfg.m = 15;
  cfg.venue_names = {"SIGIR", "SIGMOD", "SIGCOMM", "KDD",
                     "ICML", "FSE",    "MobiCom", "MM"};
  cfg.year_min = 2009;
  cfg.year_max = 2016;
  cfg.papers_per_venue_year = 40;
  cfg.author_pool = 150;
  cfg.vocab_size = 25;
  Corpus corpus = generate_synthetic(cfg, 13);

  ExperimentPlan plan = ExperimentPlan::defaults(2015, 2016);
  ValidationConfig vcfg;
  vcfg.rankins2 = fast_config(13);
  EvaluationReport report = run_validation(corpus, plan, vcfg);
  REQUIRE(report.cells.size() == 24);
  for (const auto& cell : report.cells) {
    INFO(cell.venue_id, "/", cell.method, ": ", cell.error);
    CHECK(cell.ok);
    CHECK(cell.ndcg >= 0.0);
    CHECK(cell.ndcg <= 1.0);
  }
}

TEST_CASE("per-cell failures do not poison the rest") {
  SynthConfig cfg = small_corpus_config();
  cfg.papers_per_venue_year = 40;
  Corpus corpus = generate_synthetic(cfg, 15);

  ExperimentPlan plan;
  plan.phases = {{1, {"V01", "GHOST"}}};
  plan.validation_year = 2015;
  plan.target_year = 2016;

  ValidationConfig vcfg;
  vcfg.rankins2 = fast_config(15);
  EvaluationReport report = run_validation(corpus, plan, vcfg);
  REQUIRE(report.cells.size() == 6);
  for (const auto& cell : report.cells) {
    if (cell.venue_id == "V01") {
      CHECK(cell.ok);
    } else {
      CHECK_FALSE(cell.ok);
      CHECK_FALSE(cell.error.empty());
    }
  }
  CHECK_FALSE(report.all_failed());
}

TEST_CASE("validation predictions read nothing at or after the target") {
  SynthConfig cfg = small_corpus_config();
  cfg.papers_per_venue_year = 80;
  cfg.drift = 0.3;
  Corpus corpus = generate_synthetic(cfg, 17);
  Corpus truncated = corpus.truncated_at(2014);  // validation year 2015

  // previous-year
  {
    auto full = previous_year_baseline(score_history(corpus, "V01"), "V01",
                                       2015, corpus);
    auto cut = previous_year_baseline(score_history(truncated, "V01"), "V01",
                                      2015, truncated);
    CHECK(full.values == cut.values);  // bitwise
  }
  // rankins1
  {
    auto full = rankins1(score_history(corpus, "V01"), "V01", corpus, 2015);
    auto cut =
        rankins1(score_history(truncated, "V01"), "V01", truncated, 2015);
    CHECK(full.chosen_weight == cut.chosen_weight);
    CHECK(full.relevance.values == cut.relevance.values);
  }
  // rankins2
  {
    auto full = rankins2(corpus, "V01", 2015, fast_config(17));
    auto cut = rankins2(truncated, "V01", 2015, fast_config(17));
    CHECK(full.weights == cut.weights);
    CHECK(full.relevance.values == cut.relevance.values);
  }
}

TEST_CASE("validation reports are deterministic") {
  SynthConfig cfg = small_corpus_config();
  cfg.papers_per_venue_year = 50;
  Corpus corpus = generate_synthetic(cfg, 19);

  ExperimentPlan plan;
  plan.phases = {{1, {"V01", "V02"}}};
  plan.validation_year = 2015;
  plan.target_year = 2016;
  ValidationConfig vcfg;
  vcfg.rankins2 = fast_config(19);

  EvaluationReport a = run_validation(corpus, plan, vcfg);
  EvaluationReport b = run_validation(corpus, plan, vcfg);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].ndcg == b.cells[i].ndcg);
    CHECK(a.cells[i].top == b.cells[i].top);
  }
}
