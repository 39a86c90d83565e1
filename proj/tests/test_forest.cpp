#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "rankins/forest.hpp"

using namespace rankins;

namespace {

TrainingSet make_set(const std::vector<std::vector<double>>& features,
                     const std::vector<double>& targets) {
  TrainingSet data;
  for (std::size_t i = 0; i < features.size(); ++i) {
    TrainingRow row;
    row.venue_id = "KDD";
    row.year = 2014;
    row.institution_id = "I" + std::to_string(1000 + i);
    row.features = features[i];
    row.target = targets[i];
    data.rows.push_back(std::move(row));
  }
  return data;
}

TrainingSet random_set(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
  std::vector<std::vector<double>> features(n, std::vector<double>(dim));
  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& f : features[i]) {
      f = static_cast<double>(rng() % 1000) / 1000.0;
    }
    targets[i] = static_cast<double>(rng() % 1000) / 1000.0;
  }
  return make_set(features, targets);
}

std::vector<double> predict_many(const ForestModel& model,
                                 const std::vector<std::vector<double>>& xs) {
  std::vector<double> out;
  for (const auto& x : xs) out.push_back(model.predict_row(x));
  return out;
}

}  // namespace

TEST_CASE("constant targets predict the constant exactly") {
  std::mt19937_64 rng(3);
  TrainingSet data = random_set(60, 4, rng);
  for (auto& row : data.rows) row.target = 0.25;
  ForestConfig cfg;
  cfg.n_trees = 20;
  cfg.seed = 5;
  ForestModel model = ForestModel::train(data, cfg);
  for (const auto& row : data.rows) {
    CHECK(model.predict_row(row.features) == 0.25);
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  std::mt19937_64 rng(7);
  TrainingSet data = random_set(120, 6, rng);
  std::vector<std::vector<double>> probes;
  for (int i = 0; i < 10; ++i) {
    probes.emplace_back(6);
    for (double& v : probes.back()) {
      v = static_cast<double>(rng() % 1000) / 1000.0;
    }
  }

  ForestConfig cfg;
  cfg.n_trees = 30;
  cfg.seed = 99;
  auto p1 = predict_many(ForestModel::train(data, cfg), probes);
  auto p2 = predict_many(ForestModel::train(data, cfg), probes);
  CHECK(p1 == p2);  // bitwise

  // Thread count must not change anything.
  auto p4 = predict_many(ForestModel::train(data, cfg, 4), probes);
  CHECK(p1 == p4);

  // Training-row permutation must not change anything either.
  TrainingSet shuffled = data;
  std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
  auto p5 = predict_many(ForestModel::train(shuffled, cfg), probes);
  CHECK(p1 == p5);

  ForestConfig other = cfg;
  other.seed = 100;
  auto p6 = predict_many(ForestModel::train(data, other), probes);
  CHECK(p1 != p6);
}

TEST_CASE("step function is learned to low training error") {
  std::mt19937_64 rng(11);
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  for (int i = 0; i < 200; ++i) {
    const double x = static_cast<double>(rng() % 10000) / 10000.0;
    xs.push_back({x});
    ys.push_back(x > 0.5 ? 1.0 : 0.0);
  }
  TrainingSet data = make_set(xs, ys);
  ForestModel model = ForestModel::train(data, ForestConfig{});  // defaults

  double mse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double err = model.predict_row(xs[i]) - ys[i];
    mse += err * err;
  }
  mse /= static_cast<double>(xs.size());
  CHECK(mse < 0.05);
}

TEST_CASE("depth zero reduces every tree to its bootstrap mean") {
  std::mt19937_64 rng(13);
  TrainingSet data = random_set(100, 3, rng);
  ForestConfig cfg;
  cfg.max_depth = 0;
  cfg.n_trees = 100;
  cfg.seed = 21;
  ForestModel model = ForestModel::train(data, cfg);

  double global_mean = 0.0;
  for (const auto& row : data.rows) global_mean += row.target;
  global_mean /= static_cast<double>(data.rows.size());

  const double first = model.predict_row(data.rows[0].features);
  for (const auto& row : data.rows) {
    CHECK(model.predict_row(row.features) == first);
  }
  CHECK(first == doctest::Approx(global_mean).epsilon(0.05));
}

TEST_CASE("predictions stay within the target range") {
  std::mt19937_64 rng(17);
  TrainingSet data = random_set(150, 5, rng);
  double lo = 1e300, hi = -1e300;
  for (const auto& row : data.rows) {
    lo = std::min(lo, row.target);
    hi = std::max(hi, row.target);
  }
  ForestConfig cfg;
  cfg.n_trees = 25;
  cfg.seed = 2;
  ForestModel model = ForestModel::train(data, cfg);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x(5);
    for (double& v : x) v = static_cast<double>(rng() % 2000) / 1000.0 - 0.5;
    const double p = model.predict_row(x);
    CHECK(p >= lo);
    CHECK(p <= hi);
  }
}

TEST_CASE("prediction variance shrinks as the forest grows") {
  std::mt19937_64 rng(19);
  TrainingSet data = random_set(80, 3, rng);
  const std::vector<double> probe = {0.4, 0.6, 0.2};

  auto variance_for = [&](std::size_t n_trees) {
    std::vector<double> preds;
    for (std::uint64_t family = 0; family < 12; ++family) {
      ForestConfig cfg;
      cfg.n_trees = n_trees;
      cfg.seed = 1000 + family * 7919;
      preds.push_back(ForestModel::train(data, cfg).predict_row(probe));
    }
    double mean = 0.0;
    for (double p : preds) mean += p;
    mean /= static_cast<double>(preds.size());
    double var = 0.0;
    for (double p : preds) var += (p - mean) * (p - mean);
    return var / static_cast<double>(preds.size());
  };

  const double v1 = variance_for(1);
  const double v16 = variance_for(16);
  const double v128 = variance_for(128);
  CHECK(v16 < v1);
  CHECK(v128 < v16);
}

TEST_CASE("matrix prediction is keyed by row order and clamped") {
  std::mt19937_64 rng(23);
  TrainingSet data = random_set(60, 3, rng);
  ForestConfig cfg;
  cfg.n_trees = 10;
  cfg.seed = 77;
  ForestModel model = ForestModel::train(data, cfg);

  auto corpus = testutil::empty_corpus({"A", "B"}, {"KDD"});
  DataMatrix matrix;
  matrix.venue_id = "KDD";
  matrix.year = 2016;
  matrix.rows = 2;
  matrix.cols = 3;
  matrix.data = {0.1, 0.2, 0.3, 0.9, 0.8, 0.7};
  RelevanceVector rel = model.predict(matrix, corpus, 2016);
  CHECK(rel.values.size() == 2);
  CHECK(rel.value_of("A") == model.predict_row({0.1, 0.2, 0.3}));
  CHECK(rel.value_of("A") >= 0.0);

  SUBCASE("zero-row matrix gives an empty vector") {
    DataMatrix empty;
    empty.venue_id = "KDD";
    empty.year = 2016;
    empty.rows = 0;
    empty.cols = 3;
    auto corpus0 = testutil::empty_corpus({}, {"KDD"});
    CHECK(model.predict(empty, corpus0, 2016).values.empty());
  }
  SUBCASE("column mismatch is a shape error") {
    DataMatrix bad;
    bad.venue_id = "KDD";
    bad.year = 2016;
    bad.rows = 1;
    bad.cols = 2;
    bad.data = {0.1, 0.2};
    CHECK_THROWS_AS(model.predict(bad, corpus, 2016), ShapeError);
  }
}

TEST_CASE("training rejects bad input") {
  CHECK_THROWS_AS(ForestModel::train(TrainingSet{}, ForestConfig{}),
                  TrainingError);

  std::mt19937_64 rng(29);
  TrainingSet negative = random_set(10, 2, rng);
  negative.rows[3].target = -0.5;
  CHECK_THROWS_AS(ForestModel::train(negative, ForestConfig{}),
                  TrainingError);

  TrainingSet ragged = random_set(10, 2, rng);
  ragged.rows[4].features.push_back(1.0);
  CHECK_THROWS_AS(ForestModel::train(ragged, ForestConfig{}), ShapeError);

  TrainingSet fine = random_set(10, 2, rng);
  ForestConfig bad;
  bad.feature_fraction = 0.0;
  CHECK_THROWS_AS(ForestModel::train(fine, bad), ConfigError);
}

TEST_CASE("model persistence round-trips predictions bitwise") {
  std::mt19937_64 rng(31);
  TrainingSet data = random_set(90, 4, rng);
  ForestConfig cfg;
  cfg.n_trees = 15;
  cfg.seed = 8;
  ForestModel model = ForestModel::train(data, cfg);

  auto dir = testutil::scratch_dir("forest_dump");
  const std::string path = (dir / "model.jsonl").string();
  model.save(path);
  ForestModel loaded = ForestModel::load(path);
  CHECK(loaded.tree_count() == model.tree_count());

  for (int i = 0; i < 30; ++i) {
    std::vector<double> x(4);
    for (double& v : x) v = static_cast<double>(rng() % 1000) / 999.0;
    CHECK(model.predict_row(x) == loaded.predict_row(x));
  }
}
