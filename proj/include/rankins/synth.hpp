// synth.hpp
// Seeded synthetic corpus generation for desk-scale experiments. Output is a
// pure function of (config, seed): all sampling goes through explicit
// integer/real helpers on mt19937_64, no library distribution objects.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rankins/corpus.hpp"
#include "rankins/errors.hpp"
#include "rankins/util.hpp"

namespace rankins {

struct SynthConfig {
  int m = 20;                      // tracked institutions
  int n_venues = 2;                // ignored when venue_names is non-empty
  std::vector<std::string> venue_names;
  // Eight years: enough history for every method at the default validation
  // year (the matrix pipeline reaches back 3 + u years past its target).
  int year_min = 2009;
  int year_max = 2016;
  int papers_per_venue_year = 50;
  int author_pool = 240;
  int vocab_size = 30;             // distinct keywords
  double drift = 0.1;              // 0 = stationary shares, 1 = fresh yearly
};

namespace detail {

inline std::uint64_t rand_index(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

inline double rand_unit(std::mt19937_64& rng) {
  return (rng() >> 11) * (1.0 / 9007199254740992.0);  // [0,1) with 53 bits
}

inline std::size_t sample_categorical(std::mt19937_64& rng,
                                      const std::vector<double>& weights) {
  double u = rand_unit(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

inline void normalize_l1(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum > 0.0) {
    for (double& x : v) x /= sum;
  }
}

inline std::string padded_id(const char* prefix, int value, int width) {
  std::string digits = std::to_string(value);
  std::string out(prefix);
  for (int i = static_cast<int>(digits.size()); i < width; ++i) out += '0';
  return out + digits;
}

}  // namespace detail

inline Corpus generate_synthetic(const SynthConfig& config,
                                 std::uint64_t seed) {
  const int n_venues = config.venue_names.empty()
                           ? config.n_venues
                           : static_cast<int>(config.venue_names.size());
  if (config.m < 1) throw ConfigError("synth config: m must be >= 1");
  if (n_venues < 1) throw ConfigError("synth config: zero venues");
  if (config.author_pool < 1) throw ConfigError("synth config: zero authors");
  if (config.vocab_size < 1)
    throw ConfigError("synth config: vocab_size must be >= 1");
  if (config.papers_per_venue_year < 0)
    throw ConfigError("synth config: negative papers per venue-year");
  if (config.year_min > config.year_max)
    throw ConfigError("synth config: empty year range");
  if (!(config.drift >= 0.0 && config.drift <= 1.0))
    throw ConfigError("synth config: drift rate must lie in [0,1]");

  const int m = config.m;
  std::vector<std::string> institutions(m);
  std::unordered_map<std::string, std::string> names;
  for (int i = 0; i < m; ++i) {
    institutions[i] = detail::padded_id("I", i + 1, 4);
    names.emplace(institutions[i], "Institution " + std::to_string(i + 1));
  }

  std::map<std::string, std::string> venues;
  std::vector<std::string> venue_ids(n_venues);
  for (int v = 0; v < n_venues; ++v) {
    venue_ids[v] = config.venue_names.empty() ? detail::padded_id("V", v + 1, 2)
                                              : config.venue_names[v];
    venues[venue_ids[v]] = venue_ids[v];
  }

  std::vector<std::string> authors(config.author_pool);
  for (int a = 0; a < config.author_pool; ++a) {
    authors[a] = detail::padded_id("A", a + 1, 5);
  }

  // Skewed base popularity of institutions.
  std::vector<double> base(m);
  for (int i = 0; i < m; ++i) base[i] = 1.0 / std::pow(i + 1.0, 1.2);
  detail::normalize_l1(base);

  // Home institution per author; the first m authors guarantee each
  // institution at least one member.
  std::mt19937_64 rng_authors(derive_seed(seed, 1));
  std::vector<int> home(config.author_pool);
  std::vector<std::vector<int>> members(m);
  for (int a = 0; a < config.author_pool; ++a) {
    home[a] = a < m ? a
                    : static_cast<int>(
                          detail::sample_categorical(rng_authors, base));
    members[home[a]].push_back(a);
  }

  // Per-venue institution share tables with year-to-year drift.
  const int n_years = config.year_max - config.year_min + 1;
  std::vector<std::vector<std::vector<double>>> share(
      n_venues, std::vector<std::vector<double>>(n_years));
  for (int v = 0; v < n_venues; ++v) {
    std::mt19937_64 rng_share(derive_seed(seed, 100 + v));
    for (int yi = 0; yi < n_years; ++yi) {
      std::vector<double> fresh(m);
      for (int i = 0; i < m; ++i) {
        fresh[i] = base[i] *
                   std::exp(0.5 * (2.0 * detail::rand_unit(rng_share) - 1.0));
      }
      detail::normalize_l1(fresh);
      if (yi == 0) {
        share[v][yi] = fresh;
      } else {
        share[v][yi].resize(m);
        for (int i = 0; i < m; ++i) {
          share[v][yi][i] =
              (1.0 - config.drift) * share[v][yi - 1][i] +
              config.drift * fresh[i];
        }
        detail::normalize_l1(share[v][yi]);
      }
    }
  }

  std::mt19937_64 rng_papers(derive_seed(seed, 2));
  std::vector<PaperRecord> papers;
  papers.reserve(static_cast<std::size_t>(n_venues) * n_years *
                 config.papers_per_venue_year);
  int paper_counter = 0;
  const int window = std::min(8, config.vocab_size);
  for (int v = 0; v < n_venues; ++v) {
    for (int yi = 0; yi < n_years; ++yi) {
      for (int n = 0; n < config.papers_per_venue_year; ++n) {
        PaperRecord p;
        p.paper_id = detail::padded_id("P", ++paper_counter, 7);
        p.year = config.year_min + yi;
        p.venue_id = venue_ids[v];

        int primary =
            static_cast<int>(detail::sample_categorical(rng_papers,
                                                        share[v][yi]));
        double u = detail::rand_unit(rng_papers);
        int n_authors = u < 0.55 ? 1 : (u < 0.85 ? 2 : 3);
        const auto& pool = members[primary];
        std::vector<int> chosen;
        for (int k = 0; k < n_authors && k < static_cast<int>(pool.size());
             ++k) {
          int pick = pool[detail::rand_index(rng_papers, pool.size())];
          if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end())
            chosen.push_back(pick);
        }
        if (chosen.empty()) chosen.push_back(pool[0]);
        // Cross-institution co-author.
        if (detail::rand_unit(rng_papers) < 0.25) {
          int other = static_cast<int>(
              detail::sample_categorical(rng_papers, share[v][yi]));
          const auto& opool = members[other];
          int pick = opool[detail::rand_index(rng_papers, opool.size())];
          if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end())
            chosen.push_back(pick);
        }

        for (int a : chosen) {
          Authorship auth;
          auth.author_id = authors[a];
          double r = detail::rand_unit(rng_papers);
          if (r < 0.03) {
            // recorded without affiliation; credit is lost
          } else {
            auth.institutions.push_back(institutions[home[a]]);
            if (r > 0.98) {
              auth.institutions.push_back(
                  "X" + std::to_string(detail::rand_index(rng_papers, 5)));
            }
          }
          p.authorships.push_back(std::move(auth));
        }

        int n_kw = 1 + static_cast<int>(detail::rand_index(rng_papers, 3));
        int wstart = (v * 7) % config.vocab_size;
        for (int k = 0; k < n_kw; ++k) {
          int kw;
          if (detail::rand_unit(rng_papers) < 0.75) {
            kw = (wstart +
                  static_cast<int>(detail::rand_index(rng_papers, window))) %
                 config.vocab_size;
          } else {
            kw = static_cast<int>(
                detail::rand_index(rng_papers, config.vocab_size));
          }
          std::string token = detail::padded_id("kw", kw, 2);
          if (std::find(p.keywords.begin(), p.keywords.end(), token) ==
              p.keywords.end())
            p.keywords.push_back(std::move(token));
        }

        papers.push_back(std::move(p));
      }
    }
  }

  return Corpus(std::move(papers), std::move(institutions), std::move(names),
                std::move(venues));
}

}  // namespace rankins
