// forest.hpp
// From-scratch random forest regression: bagged binary trees with
// variance-reduction splits over per-node random feature subsets. Training
// is deterministic for a fixed (data, config): rows are canonically sorted
// by (venue, year, institution) before seeding and tree t draws every random
// choice from its own generator seeded with seed XOR t, so results do not
// depend on the number of worker threads.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "rankins/corpus.hpp"
#include "rankins/errors.hpp"
#include "rankins/featspace.hpp"
#include "rankins/scoring.hpp"
#include "rankins/synth.hpp"

#include <json.hpp>

namespace rankins {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t max_depth = 8;
  std::size_t min_leaf = 2;
  double feature_fraction = 1.0 / 3.0;
  std::uint64_t seed = 1;
};

struct TrainingRow {
  std::string venue_id;
  int year = 0;
  std::string institution_id;
  std::vector<double> features;
  double target = 0.0;
};

struct TrainingSet {
  std::vector<TrainingRow> rows;
};

namespace forest_detail {

struct Node {
  bool leaf = true;
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  double value = 0.0;
};

struct Tree {
  std::vector<Node> nodes;

  double predict(const double* row) const {
    std::size_t i = 0;
    while (!nodes[i].leaf) {
      i = row[nodes[i].feature] < nodes[i].threshold ? nodes[i].left
                                                     : nodes[i].right;
    }
    return nodes[i].value;
  }
};

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double cost = std::numeric_limits<double>::infinity();
};

}  // namespace forest_detail

class ForestModel {
 public:
  ForestModel() = default;

  static ForestModel train(const TrainingSet& data, const ForestConfig& config,
                           std::size_t threads = 1);

  std::size_t dim() const { return dim_; }
  std::size_t tree_count() const { return trees_.size(); }

  double predict_row(const std::vector<double>& features) const {
    if (features.size() != dim_) {
      throw ShapeError("prediction row has dimension " +
                       std::to_string(features.size()) + ", model expects " +
                       std::to_string(dim_));
    }
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(features.data());
    return sum / static_cast<double>(trees_.size());
  }

  // Per-row predictions for a data matrix, keyed by its institution row
  // order. Negative means clamp to 0: relevance is non-negative.
  RelevanceVector predict(const DataMatrix& matrix, const Corpus& corpus,
                          int target_year) const {
    if (matrix.cols != dim_) {
      throw ShapeError("data matrix has " + std::to_string(matrix.cols) +
                       " columns, model expects " + std::to_string(dim_));
    }
    RelevanceVector rel;
    rel.venue_id = matrix.venue_id;
    rel.target_year = target_year;
    std::vector<double> row(matrix.cols);
    for (std::size_t i = 0; i < matrix.rows; ++i) {
      std::copy(matrix.data.begin() + i * matrix.cols,
                matrix.data.begin() + (i + 1) * matrix.cols, row.begin());
      double p = predict_row(row);
      rel.values.emplace(corpus.tracked_institutions()[i],
                         p < 0.0 ? 0.0 : p);
    }
    return rel;
  }

  // Versioned line-JSON dump: header line, then one line per tree. Loading
  // reproduces bit-identical predictions.
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot open file for writing: " + path);
    nlohmann::json header;
    header["format"] = "rankins-forest";
    header["version"] = 1;
    header["dim"] = dim_;
    header["n_trees"] = trees_.size();
    out << header.dump() << '\n';
    for (const auto& tree : trees_) {
      nlohmann::json jnodes = nlohmann::json::array();
      for (const auto& n : tree.nodes) {
        if (n.leaf) {
          jnodes.push_back({{"v", n.value}});
        } else {
          jnodes.push_back({{"f", n.feature},
                            {"t", n.threshold},
                            {"l", n.left},
                            {"r", n.right}});
        }
      }
      out << nlohmann::json{{"nodes", std::move(jnodes)}}.dump() << '\n';
    }
  }

  static ForestModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IngestError(path + ": empty model file");
    nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("format", "") != "rankins-forest" ||
        header.value("version", 0) != 1) {
      throw IngestError(path + ": unsupported model format");
    }
    ForestModel model;
    model.dim_ = header.at("dim").get<std::size_t>();
    const std::size_t n_trees = header.at("n_trees").get<std::size_t>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json jtree = nlohmann::json::parse(line);
      forest_detail::Tree tree;
      for (const auto& jn : jtree.at("nodes")) {
        forest_detail::Node n;
        if (jn.contains("v")) {
          n.leaf = true;
          n.value = jn.at("v").get<double>();
        } else {
          n.leaf = false;
          n.feature = jn.at("f").get<std::size_t>();
          n.threshold = jn.at("t").get<double>();
          n.left = jn.at("l").get<std::size_t>();
          n.right = jn.at("r").get<std::size_t>();
        }
        tree.nodes.push_back(n);
      }
      model.trees_.push_back(std::move(tree));
    }
    if (model.trees_.size() != n_trees) {
      throw IngestError(path + ": tree count mismatch");
    }
    return model;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<forest_detail::Tree> trees_;
};

namespace forest_detail {

// Best variance-reduction split of `indices` over a random feature subset.
// Both children must keep at least min_leaf samples. Ties keep the first
// candidate encountered (feature draw order, then ascending threshold).
inline Split find_split(const std::vector<const TrainingRow*>& rows,
                        const std::vector<std::size_t>& indices,
                        const std::vector<std::size_t>& feature_sample,
                        std::size_t min_leaf,
                        std::vector<std::pair<double, double>>& scratch) {
  Split best;
  const std::size_t n = indices.size();
  for (std::size_t f : feature_sample) {
    scratch.clear();
    for (std::size_t idx : indices) {
      scratch.emplace_back(rows[idx]->features[f], rows[idx]->target);
    }
    std::sort(scratch.begin(), scratch.end());
    if (scratch.front().first == scratch.back().first) continue;

    double left_sum = 0.0, left_sq = 0.0;
    double total_sum = 0.0, total_sq = 0.0;
    for (const auto& [v, t] : scratch) {
      total_sum += t;
      total_sq += t * t;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += scratch[i].second;
      left_sq += scratch[i].second * scratch[i].second;
      const std::size_t nl = i + 1;
      const std::size_t nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      if (scratch[i].first == scratch[i + 1].first) continue;
      const double right_sum = total_sum - left_sum;
      const double right_sq = total_sq - left_sq;
      const double cost =
          (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
          (right_sq - right_sum * right_sum / static_cast<double>(nr));
      if (cost < best.cost) {
        best.found = true;
        best.cost = cost;
        best.feature = f;
        best.threshold = 0.5 * (scratch[i].first + scratch[i + 1].first);
      }
    }
  }
  return best;
}

inline void build_node(Tree& tree, const std::vector<const TrainingRow*>& rows,
                       std::vector<std::size_t>& indices, std::size_t depth,
                       const ForestConfig& config, std::size_t n_features,
                       std::mt19937_64& rng,
                       std::vector<std::size_t>& feature_buf,
                       std::vector<std::pair<double, double>>& scratch) {
  const std::size_t node_index = tree.nodes.size();
  tree.nodes.emplace_back();

  double sum = 0.0;
  for (std::size_t idx : indices) sum += rows[idx]->target;
  const double mean = sum / static_cast<double>(indices.size());

  bool make_leaf = depth >= config.max_depth ||
                   indices.size() < 2 * config.min_leaf;
  Split split;
  if (!make_leaf) {
    // Sample the per-node feature subset (partial Fisher-Yates).
    const std::size_t n_sample = std::min(
        n_features,
        std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::ceil(config.feature_fraction *
                             static_cast<double>(n_features)))));
    for (std::size_t i = 0; i < n_sample; ++i) {
      std::size_t j = i + rng() % (n_features - i);
      std::swap(feature_buf[i], feature_buf[j]);
    }
    std::vector<std::size_t> sample(feature_buf.begin(),
                                    feature_buf.begin() + n_sample);
    split = find_split(rows, indices, sample, config.min_leaf, scratch);
    make_leaf = !split.found;
  }

  if (make_leaf) {
    tree.nodes[node_index].leaf = true;
    tree.nodes[node_index].value = mean;
    return;
  }

  std::vector<std::size_t> left, right;
  left.reserve(indices.size());
  right.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (rows[idx]->features[split.feature] < split.threshold) {
      left.push_back(idx);
    } else {
      right.push_back(idx);
    }
  }
  indices.clear();
  indices.shrink_to_fit();

  tree.nodes[node_index].leaf = false;
  tree.nodes[node_index].feature = split.feature;
  tree.nodes[node_index].threshold = split.threshold;
  tree.nodes[node_index].left = tree.nodes.size();
  build_node(tree, rows, left, depth + 1, config, n_features, rng, feature_buf,
             scratch);
  tree.nodes[node_index].right = tree.nodes.size();
  build_node(tree, rows, right, depth + 1, config, n_features, rng,
             feature_buf, scratch);
}

inline Tree build_tree(const std::vector<const TrainingRow*>& rows,
                       std::uint64_t tree_seed, const ForestConfig& config,
                       std::size_t n_features) {
  std::mt19937_64 rng(tree_seed);
  const std::size_t n = rows.size();
  std::vector<std::size_t> bootstrap(n);
  for (std::size_t i = 0; i < n; ++i) bootstrap[i] = rng() % n;

  std::vector<std::size_t> feature_buf(n_features);
  std::iota(feature_buf.begin(), feature_buf.end(), 0);
  std::vector<std::pair<double, double>> scratch;

  Tree tree;
  build_node(tree, rows, bootstrap, 0, config, n_features, rng, feature_buf,
             scratch);
  return tree;
}

}  // namespace forest_detail

inline ForestModel ForestModel::train(const TrainingSet& data,
                                      const ForestConfig& config,
                                      std::size_t threads) {
  if (data.rows.empty()) throw TrainingError("empty training set");
  if (config.n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (config.min_leaf < 1) throw ConfigError("min_leaf must be >= 1");
  if (!(config.feature_fraction > 0.0 && config.feature_fraction <= 1.0)) {
    throw ConfigError("feature_fraction must lie in (0, 1]");
  }
  const std::size_t dim = data.rows.front().features.size();
  for (const auto& row : data.rows) {
    if (row.features.size() != dim) {
      throw ShapeError("training rows disagree in feature dimension");
    }
    if (row.target < 0.0) throw TrainingError("negative training target");
  }

  // Canonical order: bootstrap draws refer to sorted positions, so row
  // permutations of the input cannot change the model.
  std::vector<const TrainingRow*> rows;
  rows.reserve(data.rows.size());
  for (const auto& row : data.rows) rows.push_back(&row);
  std::sort(rows.begin(), rows.end(),
            [](const TrainingRow* a, const TrainingRow* b) {
              if (a->venue_id != b->venue_id) return a->venue_id < b->venue_id;
              if (a->year != b->year) return a->year < b->year;
              return a->institution_id < b->institution_id;
            });

  ForestModel model;
  model.dim_ = dim;
  model.trees_.resize(config.n_trees);

  auto work = [&](std::size_t start, std::size_t stride) {
    for (std::size_t t = start; t < config.n_trees; t += stride) {
      model.trees_[t] = forest_detail::build_tree(
          rows, config.seed ^ static_cast<std::uint64_t>(t), config, dim);
    }
  };

  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) {
      pool.emplace_back(work, i, threads);
    }
    for (auto& th : pool) th.join();
  }
  return model;
}

}  // namespace rankins
