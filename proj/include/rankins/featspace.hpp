// featspace.hpp
// Feature construction for the matrix-based ranker: keyword topics, seeded
// k-means author clusters, per-entity feature vectors over the two blocks
// (author clusters, topics), and the per-venue-year data matrices whose rows
// are institution (x) venue element-wise products.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "rankins/corpus.hpp"
#include "rankins/errors.hpp"
#include "rankins/scoring.hpp"
#include "rankins/synth.hpp"
#include "rankins/util.hpp"

namespace rankins {

// Topics are the keyword vocabulary observed up to a cutoff year, plus a
// reserved topic for keywordless papers. A paper's distribution is uniform
// over its distinct keywords.
class TopicModel {
 public:
  static constexpr const char* kUnknownTopic = "__unknown__";

  static TopicModel fit(const Corpus& corpus, int upto_year) {
    TopicModel model;
    model.upto_year_ = upto_year;
    std::set<std::string> vocab;
    for (const auto& p : corpus.papers()) {
      if (p.year > upto_year) continue;
      for (const auto& kw : p.keywords) vocab.insert(kw);
    }
    model.topics_.assign(vocab.begin(), vocab.end());
    model.topics_.push_back(kUnknownTopic);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < model.topics_.size(); ++i) {
      index.emplace(model.topics_[i], i);
    }
    for (const auto& p : corpus.papers()) {
      if (p.year > upto_year) continue;
      std::set<std::string> distinct(p.keywords.begin(), p.keywords.end());
      std::vector<std::pair<std::size_t, double>> dist;
      if (distinct.empty()) {
        dist.emplace_back(model.topics_.size() - 1, 1.0);
      } else {
        const double w = 1.0 / static_cast<double>(distinct.size());
        for (const auto& kw : distinct) dist.emplace_back(index.at(kw), w);
      }
      model.assignment_.emplace(p.paper_id, std::move(dist));
    }
    return model;
  }

  std::size_t size() const { return topics_.size(); }  // s
  int upto_year() const { return upto_year_; }
  const std::vector<std::string>& topics() const { return topics_; }

  // Sparse distribution (topic index, weight); weights sum to 1.
  const std::vector<std::pair<std::size_t, double>>& distribution_of(
      const std::string& paper_id) const {
    auto it = assignment_.find(paper_id);
    if (it == assignment_.end()) {
      throw MismatchError("paper not covered by topic model: " + paper_id);
    }
    return it->second;
  }

 private:
  int upto_year_ = 0;
  std::vector<std::string> topics_;
  std::unordered_map<std::string, std::vector<std::pair<std::size_t, double>>>
      assignment_;
};

// Seeded k-means over author topic profiles. Identical inputs and seed give
// identical membership: k-means++ initialization, Euclidean metric, ties
// always broken by lowest index, empty clusters re-seeded from the farthest
// point, 50-iteration cap.
class AuthorClustering {
 public:
  static AuthorClustering fit(const Corpus& corpus, const TopicModel& topics,
                              std::size_t k, std::uint64_t seed) {
    if (k == 0) throw ArgumentError("cluster count must be >= 1");
    const std::size_t dim = topics.size();

    // Author profiles: summed paper-topic distributions, L1-normalized.
    // Only authors with at least one paper up to the topic cutoff take part.
    std::map<std::string, std::vector<double>> profiles;
    for (const auto& p : corpus.papers()) {
      if (p.year > topics.upto_year()) continue;
      const auto& dist = topics.distribution_of(p.paper_id);
      for (const auto& a : p.authorships) {
        auto& prof = profiles[a.author_id];
        if (prof.empty()) prof.assign(dim, 0.0);
        for (const auto& [topic, w] : dist) prof[topic] += w;
      }
    }

    AuthorClustering result;
    if (profiles.empty()) {
      result.k_ = 0;
      return result;
    }

    std::vector<std::string> authors;
    std::vector<std::vector<double>> points;
    authors.reserve(profiles.size());
    points.reserve(profiles.size());
    for (auto& [author, prof] : profiles) {
      double sum = 0.0;
      for (double v : prof) sum += v;
      if (sum > 0.0) {
        for (double& v : prof) v /= sum;
      }
      authors.push_back(author);
      points.push_back(std::move(prof));
    }

    const std::size_t n = points.size();
    const std::size_t k_eff = std::min(k, n);
    std::mt19937_64 rng(seed);

    std::vector<std::vector<double>> centers = kmeans_pp(points, k_eff, rng);
    std::vector<std::size_t> assign(n, k_eff);  // sentinel: nothing assigned
    std::vector<std::size_t> counts(k_eff, 0);
    for (std::size_t iter = 0; iter < 50; ++iter) {
      bool changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = nearest_center(points[i], centers);
        if (best != assign[i]) {
          changed = true;
          assign[i] = best;
        }
      }
      if (!changed) break;
      // Recompute means.
      for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        ++counts[assign[i]];
        for (std::size_t d = 0; d < dim; ++d)
          centers[assign[i]][d] += points[i][d];
      }
      for (std::size_t c = 0; c < k_eff; ++c) {
        if (counts[c] > 0) {
          for (double& v : centers[c]) v /= static_cast<double>(counts[c]);
        } else {
          // Re-seed from the point farthest from its own center.
          std::size_t far = 0;
          double far_d = -1.0;
          for (std::size_t i = 0; i < n; ++i) {
            double d = sq_dist(points[i], centers[assign[i]]);
            if (d > far_d) {
              far_d = d;
              far = i;
            }
          }
          centers[c] = points[far];
          assign[far] = c;
        }
      }
    }
    // Final assignment against the last centers.
    for (std::size_t i = 0; i < n; ++i) {
      assign[i] = nearest_center(points[i], centers);
    }

    result.k_ = k_eff;
    result.centers_ = std::move(centers);
    for (std::size_t i = 0; i < n; ++i) {
      result.membership_.emplace(authors[i], assign[i]);
    }
    // Authors unseen by the cutoff map to the center nearest the zero
    // profile; a fixed choice that depends only on fitted data.
    result.fallback_ =
        result.k_ == 0
            ? 0
            : nearest_center(std::vector<double>(dim, 0.0), result.centers_);
    return result;
  }

  std::size_t cluster_count() const { return k_; }
  bool empty() const { return k_ == 0; }
  std::size_t fitted_author_count() const { return membership_.size(); }

  std::size_t cluster_of(const std::string& author) const {
    auto it = membership_.find(author);
    return it == membership_.end() ? fallback_ : it->second;
  }

  const std::unordered_map<std::string, std::size_t>& membership() const {
    return membership_;
  }

 private:
  static double sq_dist(const std::vector<double>& a,
                        const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double t = a[i] - b[i];
      d += t * t;
    }
    return d;
  }

  static std::size_t nearest_center(
      const std::vector<double>& p,
      const std::vector<std::vector<double>>& centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double d = sq_dist(p, centers[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return best;
  }

  static std::vector<std::vector<double>> kmeans_pp(
      const std::vector<std::vector<double>>& points, std::size_t k,
      std::mt19937_64& rng) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    std::vector<bool> used(n, false);
    std::size_t first = detail::rand_index(rng, n);
    centers.push_back(points[first]);
    used[first] = true;
    std::vector<double> d2(n);
    while (centers.size() < k) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = sq_dist(points[i], centers[0]);
        for (std::size_t c = 1; c < centers.size(); ++c) {
          d2[i] = std::min(d2[i], sq_dist(points[i], centers[c]));
        }
        if (used[i]) d2[i] = 0.0;
        total += d2[i];
      }
      std::size_t pick = n;
      if (total > 0.0) {
        double u = detail::rand_unit(rng) * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += d2[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
      }
      if (pick == n) {
        // All remaining points coincide with existing centers; take the
        // lowest unused index.
        for (std::size_t i = 0; i < n; ++i) {
          if (!used[i]) {
            pick = i;
            break;
          }
        }
        if (pick == n) pick = 0;
      }
      centers.push_back(points[pick]);
      used[pick] = true;
    }
    return centers;
  }

  std::size_t k_ = 0;
  std::vector<std::vector<double>> centers_;
  std::unordered_map<std::string, std::size_t> membership_;
  std::size_t fallback_ = 0;
};

// Two-block feature vector: author-cluster credit and topic mass, each block
// L1-normalized, all-zero when the entity has no papers.
struct FeatureVector {
  std::vector<double> author_block;  // length K
  std::vector<double> topic_block;   // length s

  std::size_t dim() const { return author_block.size() + topic_block.size(); }

  std::vector<double> concat() const {
    std::vector<double> out;
    out.reserve(dim());
    out.insert(out.end(), author_block.begin(), author_block.end());
    out.insert(out.end(), topic_block.begin(), topic_block.end());
    return out;
  }

  bool is_zero() const {
    for (double v : author_block)
      if (v != 0.0) return false;
    for (double v : topic_block)
      if (v != 0.0) return false;
    return true;
  }
};

// m x d matrix of institution (x) venue feature products for one venue-year.
// Row order is the tracked-institution order of the corpus.
struct DataMatrix {
  std::string venue_id;
  int year = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  double at(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }

  bool same_shape(const DataMatrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

namespace detail {

inline void l1_normalize_block(std::vector<double>& block) {
  double sum = 0.0;
  for (double v : block) sum += v;
  if (sum > 0.0) {
    for (double& v : block) v /= sum;
  }
}

}  // namespace detail

// All institution vectors (tracked order) plus all venue vectors for one
// aggregation cutoff, built in a single pass over the papers.
struct EntityVectors {
  int upto_year = 0;
  std::vector<FeatureVector> institutions;  // tracked order
  std::map<std::string, FeatureVector> venues;
};

inline EntityVectors build_all_vectors(const Corpus& corpus, int upto_year,
                                       const AuthorClustering& clustering,
                                       const TopicModel& topics) {
  const std::size_t K = std::max<std::size_t>(clustering.cluster_count(), 1);
  const std::size_t s = topics.size();
  const auto& tracked = corpus.tracked_institutions();

  EntityVectors out;
  out.upto_year = upto_year;
  out.institutions.assign(tracked.size(),
                          FeatureVector{std::vector<double>(K, 0.0),
                                        std::vector<double>(s, 0.0)});
  for (const auto& [venue, abbrev] : corpus.venues()) {
    (void)abbrev;
    out.venues.emplace(venue, FeatureVector{std::vector<double>(K, 0.0),
                                            std::vector<double>(s, 0.0)});
  }

  for (const auto& p : corpus.papers()) {
    if (p.year > upto_year) continue;
    const auto& dist = topics.distribution_of(p.paper_id);
    auto& venue_vec = out.venues.at(p.venue_id);
    const double author_share =
        1.0 / static_cast<double>(p.authorships.size());
    for (const auto& a : p.authorships) {
      if (a.institutions.empty()) continue;
      const std::size_t cluster = clustering.cluster_of(a.author_id);
      const double inst_share =
          author_share / static_cast<double>(a.institutions.size());
      double credited = 0.0;
      for (const auto& inst : a.institutions) {
        credited += inst_share;
        if (!corpus.is_tracked(inst)) continue;
        auto& vec = out.institutions[corpus.row_of(inst)];
        vec.author_block[cluster] += inst_share;
        for (const auto& [topic, w] : dist) {
          vec.topic_block[topic] += inst_share * w;
        }
      }
      venue_vec.author_block[cluster] += credited;
      for (const auto& [topic, w] : dist) {
        venue_vec.topic_block[topic] += credited * w;
      }
    }
  }

  for (auto& vec : out.institutions) {
    detail::l1_normalize_block(vec.author_block);
    detail::l1_normalize_block(vec.topic_block);
  }
  for (auto& [venue, vec] : out.venues) {
    detail::l1_normalize_block(vec.author_block);
    detail::l1_normalize_block(vec.topic_block);
  }
  return out;
}

// Single-entity convenience: institution ids aggregate over all venues,
// venue ids over all institutions. Venue ids take precedence when an id
// names both.
inline FeatureVector build_entity_vector(const Corpus& corpus,
                                         const std::string& entity,
                                         int upto_year,
                                         const AuthorClustering& clustering,
                                         const TopicModel& topics) {
  EntityVectors all = build_all_vectors(corpus, upto_year, clustering, topics);
  if (corpus.has_venue(entity)) return all.venues.at(entity);
  return all.institutions[corpus.row_of(entity)];
}

// Row k = institution_k (x) venue, element-wise.
inline DataMatrix build_data_matrix(
    const std::string& venue, int year,
    const std::vector<FeatureVector>& institution_vectors,
    const FeatureVector& venue_vector) {
  const std::vector<double> c = venue_vector.concat();
  DataMatrix mat;
  mat.venue_id = venue;
  mat.year = year;
  mat.rows = institution_vectors.size();
  mat.cols = c.size();
  mat.data.resize(mat.rows * mat.cols);
  for (std::size_t k = 0; k < institution_vectors.size(); ++k) {
    if (institution_vectors[k].dim() != c.size() ||
        institution_vectors[k].author_block.size() !=
            venue_vector.author_block.size()) {
      throw ShapeError("institution/venue feature dimension mismatch: " +
                       std::to_string(institution_vectors[k].dim()) + " vs " +
                       std::to_string(c.size()));
    }
    const std::vector<double> row = institution_vectors[k].concat();
    for (std::size_t j = 0; j < c.size(); ++j) {
      mat.at(k, j) = row[j] * c[j];
    }
  }
  return mat;
}

// Debug export: [institution_id, then d feature columns].
inline void export_data_matrix(const DataMatrix& mat, const Corpus& corpus,
                               const std::string& path) {
  TsvWriter w(path);
  for (std::size_t i = 0; i < mat.rows; ++i) {
    std::vector<std::string> fields;
    fields.reserve(mat.cols + 1);
    fields.push_back(corpus.tracked_institutions()[i]);
    for (std::size_t j = 0; j < mat.cols; ++j) {
      fields.push_back(format_double(mat.at(i, j)));
    }
    w.row(fields);
  }
}

}  // namespace rankins
