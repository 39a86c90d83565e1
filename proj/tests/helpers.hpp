// helpers.hpp
// Shared fixtures for the test suites: scratch directories, tiny hand-built
// corpora, rank correlation, and an NDCG oracle kept independent of the
// library implementation.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rankins/corpus.hpp"

namespace testutil {

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rankins_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline rankins::CorpusPaths paths_in(const std::filesystem::path& dir) {
  rankins::CorpusPaths p;
  p.paper_file = (dir / "papers.tsv").string();
  p.affiliation_file = (dir / "affiliations.tsv").string();
  p.institution_file = (dir / "institutions.tsv").string();
  p.venue_file = (dir / "venues.tsv").string();
  return p;
}

// Corpus with given tracked institutions and venues but no papers; handy
// for metric and smoothing tests that only need the tracked set.
inline rankins::Corpus empty_corpus(std::vector<std::string> institutions,
                                    std::vector<std::string> venues) {
  std::unordered_map<std::string, std::string> names;
  for (const auto& i : institutions) names.emplace(i, i);
  std::map<std::string, std::string> vmap;
  for (const auto& v : venues) vmap.emplace(v, v);
  return rankins::Corpus({}, std::move(institutions), std::move(names),
                         std::move(vmap));
}

// Independent DCG/NDCG oracle: plain loops over the textbook sums.
inline double oracle_dcg(const std::vector<double>& rel, std::size_t n) {
  double out = 0.0;
  for (std::size_t i = 0; i < rel.size() && i < n; ++i) {
    out += rel[i] / std::log2(static_cast<double>(i + 2));
  }
  return out;
}

inline double oracle_ndcg(const std::vector<double>& rel_in_predicted_order,
                          std::vector<double> all_truth, std::size_t n) {
  std::sort(all_truth.begin(), all_truth.end(), std::greater<double>());
  const double idcg = oracle_dcg(all_truth, n);
  if (idcg == 0.0) return 0.0;
  return oracle_dcg(rel_in_predicted_order, n) / idcg;
}

inline std::vector<double> ranks_with_ties(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(const std::vector<double>& a,
                       const std::vector<double>& b) {
  const auto ra = ranks_with_ties(a);
  const auto rb = ranks_with_ties(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace testutil
