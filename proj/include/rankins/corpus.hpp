// corpus.hpp
// Data model for the bibliographic corpus: papers with authorships and
// keywords, the tracked institution list (whose file order fixes matrix row
// order everywhere downstream), venues, and year-wise partitioning.

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rankins/errors.hpp"
#include "rankins/tsv.hpp"

namespace rankins {

struct Authorship {
  std::string author_id;
  // Institution ids, de-duplicated, first-seen order. Empty = unaffiliated.
  std::vector<std::string> institutions;

  bool operator==(const Authorship&) const = default;
};

struct PaperRecord {
  std::string paper_id;
  int year = 0;
  std::string venue_id;
  std::vector<Authorship> authorships;  // non-empty, no duplicate author ids
  std::vector<std::string> keywords;    // may be empty

  bool operator==(const PaperRecord&) const = default;
};

class Corpus {
 public:
  Corpus() = default;

  Corpus(std::vector<PaperRecord> papers,
         std::vector<std::string> tracked_institutions,
         std::unordered_map<std::string, std::string> institution_names,
         std::map<std::string, std::string> venues)
      : papers_(std::move(papers)),
        tracked_(std::move(tracked_institutions)),
        institution_names_(std::move(institution_names)),
        venues_(std::move(venues)) {
    tracked_index_.reserve(tracked_.size());
    for (std::size_t i = 0; i < tracked_.size(); ++i) {
      if (!tracked_index_.emplace(tracked_[i], i).second) {
        throw ReferentialError("duplicate tracked institution: " + tracked_[i]);
      }
    }
    for (const auto& p : papers_) {
      if (p.authorships.empty()) {
        throw ReferentialError("paper " + p.paper_id + " has no authorships");
      }
      if (!venues_.count(p.venue_id)) {
        throw ReferentialError("paper " + p.paper_id +
                               " references unknown venue " + p.venue_id);
      }
      if (min_year_ > max_year_) {
        min_year_ = max_year_ = p.year;
      } else {
        min_year_ = std::min(min_year_, p.year);
        max_year_ = std::max(max_year_, p.year);
      }
      for (const auto& a : p.authorships) {
        for (const auto& inst : a.institutions) {
          if (!tracked_index_.count(inst)) untracked_.insert(inst);
        }
      }
    }
  }

  const std::vector<PaperRecord>& papers() const { return papers_; }
  const std::vector<std::string>& tracked_institutions() const {
    return tracked_;
  }
  const std::map<std::string, std::string>& venues() const { return venues_; }
  const std::unordered_map<std::string, std::string>& institution_names()
      const {
    return institution_names_;
  }

  bool is_tracked(const std::string& inst) const {
    return tracked_index_.count(inst) > 0;
  }
  // Row index of a tracked institution in every matrix of the run.
  std::size_t row_of(const std::string& inst) const {
    auto it = tracked_index_.find(inst);
    if (it == tracked_index_.end()) {
      throw ReferentialError("institution not tracked: " + inst);
    }
    return it->second;
  }
  const std::set<std::string>& untracked_institutions() const {
    return untracked_;
  }

  bool has_venue(const std::string& venue) const {
    return venues_.count(venue) > 0;
  }

  int min_year() const { return min_year_; }
  int max_year() const { return max_year_; }
  bool empty() const { return papers_.empty(); }

  // Copy containing only papers with year <= cutoff. Tracked institutions,
  // names and venues are preserved.
  Corpus truncated_at(int cutoff_year) const {
    std::vector<PaperRecord> kept;
    kept.reserve(papers_.size());
    for (const auto& p : papers_) {
      if (p.year <= cutoff_year) kept.push_back(p);
    }
    return Corpus(std::move(kept), tracked_, institution_names_, venues_);
  }

  // Year range is derived from the paper list, so equality is over papers,
  // tracked institutions (ids and names) and venues.
  bool operator==(const Corpus& other) const {
    return papers_ == other.papers_ && tracked_ == other.tracked_ &&
           institution_names_ == other.institution_names_ &&
           venues_ == other.venues_;
  }

 private:
  std::vector<PaperRecord> papers_;
  std::vector<std::string> tracked_;
  std::unordered_map<std::string, std::size_t> tracked_index_;
  std::unordered_map<std::string, std::string> institution_names_;
  std::map<std::string, std::string> venues_;  // id -> abbreviation
  std::set<std::string> untracked_;
  int min_year_ = 0;
  int max_year_ = -1;
};

struct YearSlice {
  int year = 0;
  std::vector<PaperRecord> papers;
};

inline std::map<int, YearSlice> partition_by_year(const Corpus& corpus) {
  std::map<int, YearSlice> slices;
  for (const auto& p : corpus.papers()) {
    auto& slice = slices[p.year];
    slice.year = p.year;
    slice.papers.push_back(p);
  }
  return slices;
}

struct CorpusPaths {
  std::string paper_file;
  std::string affiliation_file;
  std::string institution_file;
  std::string venue_file;
};

// Loads the four TSV files into a Corpus. Formats:
//   institution_file:  [institution_id, display_name]  (order = row order)
//   venue_file:        [venue_id, abbreviation]
//   paper_file:        [paper_id, year, venue_id, keyword_list]
//                      keyword_list ";"-joined, may be empty
//   affiliation_file:  [paper_id, author_id, institution_id_or_dash]
// Unknown paper or venue references raise ReferentialError; institutions not
// in institution_file are kept in authorships and flagged untracked.
inline Corpus load_corpus(const CorpusPaths& paths) {
  std::vector<std::string> tracked;
  std::unordered_map<std::string, std::string> names;
  std::unordered_set<std::string> tracked_seen;
  read_tsv(paths.institution_file, 2,
           [&](const std::vector<std::string>& f, std::size_t line) {
             if (!tracked_seen.insert(f[0]).second) {
               throw IngestError(paths.institution_file + ":" +
                                 std::to_string(line) +
                                 ": duplicate institution id " + f[0]);
             }
             tracked.push_back(f[0]);
             names.emplace(f[0], f[1]);
           });

  std::map<std::string, std::string> venues;
  read_tsv(paths.venue_file, 2,
           [&](const std::vector<std::string>& f, std::size_t) {
             venues[f[0]] = f[1];
           });

  std::vector<PaperRecord> papers;
  std::unordered_map<std::string, std::size_t> paper_index;
  read_tsv(paths.paper_file, 4,
           [&](const std::vector<std::string>& f, std::size_t line) {
             PaperRecord p;
             p.paper_id = f[0];
             p.year = static_cast<int>(parse_long(
                 f[1], paths.paper_file + ":" + std::to_string(line)));
             p.venue_id = f[2];
             if (!venues.count(p.venue_id)) {
               throw ReferentialError(paths.paper_file + ":" +
                                      std::to_string(line) +
                                      ": unknown venue " + p.venue_id);
             }
             if (!f[3].empty()) {
               for (auto& kw : split(f[3], ';')) {
                 if (!kw.empty()) p.keywords.push_back(std::move(kw));
               }
             }
             if (!paper_index.emplace(p.paper_id, papers.size()).second) {
               throw IngestError(paths.paper_file + ":" +
                                 std::to_string(line) +
                                 ": duplicate paper id " + p.paper_id);
             }
             papers.push_back(std::move(p));
           });

  read_tsv(paths.affiliation_file, 3,
           [&](const std::vector<std::string>& f, std::size_t line) {
             auto it = paper_index.find(f[0]);
             if (it == paper_index.end()) {
               throw ReferentialError(
                   paths.affiliation_file + ":" + std::to_string(line) +
                   ": affiliation references unknown paper " + f[0]);
             }
             PaperRecord& p = papers[it->second];
             Authorship* author = nullptr;
             for (auto& a : p.authorships) {
               if (a.author_id == f[1]) {
                 author = &a;
                 break;
               }
             }
             if (!author) {
               p.authorships.push_back(Authorship{f[1], {}});
               author = &p.authorships.back();
             }
             if (f[2] != "-") {
               // De-duplicate repeated (paper, author, institution) rows.
               auto& insts = author->institutions;
               if (std::find(insts.begin(), insts.end(), f[2]) == insts.end())
                 insts.push_back(f[2]);
             }
           });

  return Corpus(std::move(papers), std::move(tracked), std::move(names),
                std::move(venues));
}

// Writes a Corpus back to the four TSV formats. Reloading the written files
// yields an equal Corpus.
inline void save_corpus(const Corpus& corpus, const CorpusPaths& paths) {
  {
    TsvWriter w(paths.institution_file);
    for (const auto& inst : corpus.tracked_institutions()) {
      auto it = corpus.institution_names().find(inst);
      w.row({inst, it == corpus.institution_names().end() ? inst : it->second});
    }
  }
  {
    TsvWriter w(paths.venue_file);
    for (const auto& [id, abbrev] : corpus.venues()) w.row({id, abbrev});
  }
  {
    TsvWriter w(paths.paper_file);
    for (const auto& p : corpus.papers()) {
      std::string kws;
      for (std::size_t i = 0; i < p.keywords.size(); ++i) {
        if (i) kws += ';';
        kws += p.keywords[i];
      }
      w.row({p.paper_id, std::to_string(p.year), p.venue_id, kws});
    }
  }
  {
    TsvWriter w(paths.affiliation_file);
    for (const auto& p : corpus.papers()) {
      for (const auto& a : p.authorships) {
        if (a.institutions.empty()) {
          w.row({p.paper_id, a.author_id, "-"});
        } else {
          for (const auto& inst : a.institutions)
            w.row({p.paper_id, a.author_id, inst});
        }
      }
    }
  }
}

}  // namespace rankins
