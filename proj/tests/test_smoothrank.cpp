#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "rankins/smoothrank.hpp"

using namespace rankins;

namespace {

std::vector<std::string> institutions(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back("I" + std::to_string(100 + i));
  }
  return out;
}

std::map<int, ScoreTable> random_history(const std::vector<std::string>& insts,
                                         int first_year, int last_year,
                                         std::mt19937_64& rng) {
  std::map<int, ScoreTable> history;
  for (int y = first_year; y <= last_year; ++y) {
    std::map<std::string, double> scores;
    for (const auto& inst : insts) {
      if (rng() % 5 == 0) continue;  // leave some institutions at zero
      scores.emplace(inst, static_cast<double>(rng() % 1000) / 1000.0);
    }
    history.emplace(y, ScoreTable("KDD", y, std::move(scores), 50));
  }
  return history;
}

// Exhaustive independent search over the grid: candidate scores, an
// independent NDCG, and the >=-update tie rule, all in plain test code.
struct OracleResult {
  double w_opt = 1.0;
  double ndcg = 0.0;
  std::map<std::string, double> relevance;
};

OracleResult oracle_rankins1(const std::map<int, ScoreTable>& history,
                             const std::vector<std::string>& insts,
                             int target_year, std::size_t cutoff,
                             std::size_t grid_size) {
  auto score_at = [&](int year, const std::string& inst) {
    auto it = history.find(year);
    return it == history.end() ? 0.0 : it->second.score_of(inst);
  };
  auto smooth = [&](int base, double w) {
    std::vector<double> out;
    for (const auto& inst : insts) {
      out.push_back(score_at(base, inst) + w * score_at(base - 1, inst) +
                    w * w * score_at(base - 2, inst) +
                    w * w * w * score_at(base - 3, inst));
    }
    return out;
  };
  auto ndcg_of = [&](const std::vector<double>& candidate) {
    std::vector<double> truth;
    for (const auto& inst : insts) {
      truth.push_back(score_at(target_year - 1, inst));
    }
    // Order candidates descending, ties by ascending institution id (the
    // institutions come pre-sorted ascending, so stable sort suffices).
    std::vector<std::size_t> order(insts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return candidate[a] > candidate[b];
                     });
    std::vector<double> rel_in_order;
    for (std::size_t idx : order) rel_in_order.push_back(truth[idx]);
    return testutil::oracle_ndcg(rel_in_order, truth, cutoff);
  };

  OracleResult result;
  double max_score = 0.0;
  for (std::size_t g = 1; g <= grid_size; ++g) {
    const double w = static_cast<double>(g) / static_cast<double>(grid_size);
    const double score = ndcg_of(smooth(target_year - 2, w));
    if (score >= max_score) {
      max_score = score;
      result.w_opt = w;
    }
  }
  result.ndcg = max_score;

  auto final_scores = smooth(target_year - 1, result.w_opt);
  double sum = 0.0;
  for (double s : final_scores) sum += s;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    result.relevance[insts[i]] = final_scores[i] / sum;
  }
  return result;
}

}  // namespace

TEST_CASE("smoothing grid shape") {
  auto grid = SmoothingGrid::make();
  REQUIRE(grid.weights.size() == 20);
  CHECK(grid.weights.front() == 0.05);
  CHECK(grid.weights.back() == 1.0);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(grid.weights[i] == static_cast<double>(i + 1) / 20.0);
    if (i > 0) CHECK(grid.weights[i] > grid.weights[i - 1]);
  }
  CHECK_THROWS_AS(SmoothingGrid::make(0), ArgumentError);
}

TEST_CASE("single institution normalizes to one") {
  auto corpus = testutil::empty_corpus({"I1"}, {"KDD"});
  std::map<int, ScoreTable> history;
  history.emplace(2015, ScoreTable("KDD", 2015, {{"I1", 0.42}}, 10));

  auto result = rankins1(history, "KDD", corpus, 2016);
  CHECK(result.relevance.value_of("I1") == 1.0);
}

TEST_CASE("identical training years force the tie-break to 1.0") {
  auto insts = institutions(6);
  auto corpus = testutil::empty_corpus(insts, {"KDD"});
  std::map<std::string, double> year_scores;
  for (std::size_t i = 0; i < insts.size(); ++i) {
    year_scores[insts[i]] = 0.1 * static_cast<double>(i + 1);
  }
  std::map<int, ScoreTable> history;
  for (int y = 2011; y <= 2015; ++y) {
    history.emplace(y, ScoreTable("KDD", y, year_scores, 20));
  }

  auto result = rankins1(history, "KDD", corpus, 2016);
  CHECK(result.chosen_weight == 1.0);
  CHECK(result.validation_ndcg == 1.0);
}

TEST_CASE("matches the exhaustive grid oracle on random instances") {
  std::mt19937_64 rng(31);
  auto insts = institutions(10);
  auto corpus = testutil::empty_corpus(insts, {"KDD"});
  for (int t = 0; t < 100; ++t) {
    auto history = random_history(insts, 2011, 2015, rng);
    auto result = rankins1(history, "KDD", corpus, 2016, 20);
    auto oracle = oracle_rankins1(history, insts, 2016, 20, 20);

    CHECK(result.chosen_weight == oracle.w_opt);  // bitwise
    CHECK(result.validation_ndcg ==
          doctest::Approx(oracle.ndcg).epsilon(1e-12));
    for (const auto& inst : insts) {
      CHECK(result.relevance.value_of(inst) ==
            doctest::Approx(oracle.relevance.at(inst)).epsilon(1e-12));
    }
    double sum = 0.0;
    for (const auto& [inst, v] : result.relevance.values) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("output ordering is invariant under history rescaling") {
  std::mt19937_64 rng(47);
  auto insts = institutions(8);
  auto corpus = testutil::empty_corpus(insts, {"KDD"});
  auto history = random_history(insts, 2011, 2015, rng);

  std::map<int, ScoreTable> scaled;
  for (const auto& [y, table] : history) {
    std::map<std::string, double> s;
    for (const auto& [inst, v] : table.scores()) s.emplace(inst, 37.0 * v);
    scaled.emplace(y, ScoreTable("KDD", y, std::move(s), 50));
  }

  auto a = rankins1(history, "KDD", corpus, 2016);
  auto b = rankins1(scaled, "KDD", corpus, 2016);
  CHECK(a.chosen_weight == b.chosen_weight);
  auto ra = Ranking::from_scores(a.relevance.values);
  auto rb = Ranking::from_scores(b.relevance.values);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra.entries()[i].first == rb.entries()[i].first);
  }
}

TEST_CASE("history only at the most recent year reduces to previous-year") {
  auto insts = institutions(7);
  auto corpus = testutil::empty_corpus(insts, {"KDD"});
  std::map<std::string, double> scores;
  std::mt19937_64 rng(3);
  for (const auto& inst : insts) {
    scores[inst] = static_cast<double>(rng() % 100) / 100.0;
  }
  std::map<int, ScoreTable> history;
  history.emplace(2015, ScoreTable("KDD", 2015, scores, 30));

  auto result = rankins1(history, "KDD", corpus, 2016);
  auto baseline = previous_year_baseline(history, "KDD", 2016, corpus);
  auto ra = Ranking::from_scores(result.relevance.values);
  auto rb = Ranking::from_scores(baseline.values);
  REQUIRE(ra.size() == rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra.entries()[i].first == rb.entries()[i].first);
  }
}

TEST_CASE("all-zero history is degenerate") {
  auto corpus = testutil::empty_corpus({"I1", "I2"}, {"KDD"});
  std::map<int, ScoreTable> empty_history;
  CHECK_THROWS_AS(rankins1(empty_history, "KDD", corpus, 2016),
                  DegenerateHistoryError);

  // History only outside the final smoothing window is degenerate too.
  std::map<int, ScoreTable> stale;
  stale.emplace(2011, ScoreTable("KDD", 2011, {{"I1", 0.5}}, 5));
  CHECK_THROWS_AS(rankins1(stale, "KDD", corpus, 2016),
                  DegenerateHistoryError);
}
