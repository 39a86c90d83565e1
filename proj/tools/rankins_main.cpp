// rankins_main.cpp
// Command-line front end: corpus synthesis, per-venue ranking, NDCG
// evaluation of prediction files, and the full validation protocol.
// Exit codes: 0 success, 1 usage error, 2 pipeline/data error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankins/corpus.hpp"
#include "rankins/manifest.hpp"
#include "rankins/metrics.hpp"
#include "rankins/pipeline.hpp"
#include "rankins/scoring.hpp"
#include "rankins/smoothrank.hpp"
#include "rankins/synth.hpp"
#include "rankins/temporal.hpp"
#include "rankins/version.hpp"

namespace fs = std::filesystem;
using namespace rankins;

namespace {

// Usage-class failure discovered after flag parsing (unknown venue, bad
// method combination); maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorpusFlags {
  std::string dir = "corpus";
  std::string papers, affiliations, institutions, venues;

  void attach(CLI::App* cmd) {
    cmd->add_option("--corpus", dir,
                    "Corpus directory holding papers.tsv, affiliations.tsv, "
                    "institutions.tsv, venues.tsv")
        ->capture_default_str();
    cmd->add_option("--papers", papers, "Paper TSV (overrides --corpus)");
    cmd->add_option("--affiliations", affiliations,
                    "Affiliation TSV (overrides --corpus)");
    cmd->add_option("--institutions", institutions,
                    "Institution TSV (overrides --corpus)");
    cmd->add_option("--venues-file", venues, "Venue TSV (overrides --corpus)");
  }

  CorpusPaths paths() const {
    CorpusPaths p;
    p.paper_file = papers.empty() ? dir + "/papers.tsv" : papers;
    p.affiliation_file =
        affiliations.empty() ? dir + "/affiliations.tsv" : affiliations;
    p.institution_file =
        institutions.empty() ? dir + "/institutions.tsv" : institutions;
    p.venue_file = venues.empty() ? dir + "/venues.tsv" : venues;
    return p;
  }

  void add_inputs(RunManifest& manifest) const {
    const CorpusPaths p = paths();
    manifest.add_input(p.paper_file);
    manifest.add_input(p.affiliation_file);
    manifest.add_input(p.institution_file);
    manifest.add_input(p.venue_file);
  }
};

struct RankIns2Flags {
  std::uint64_t clusters = 500;
  std::size_t u = 2;
  std::vector<double> lambdas;
  std::size_t trees = 100;
  std::size_t depth = 8;
  std::size_t min_leaf = 2;
  double feature_fraction = 1.0 / 3.0;
  bool per_venue_model = false;
  bool anchor_initial = false;
  std::size_t threads = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--clusters", clusters, "Author cluster count K")
        ->capture_default_str();
    cmd->add_option("--u", u, "Weight refinement iterations")
        ->capture_default_str();
    cmd->add_option("--lambda", lambdas,
                    "Refinement regularizer; repeat for per-iteration values "
                    "(default 200)");
    cmd->add_option("--trees", trees, "Forest size")->capture_default_str();
    cmd->add_option("--depth", depth, "Maximum tree depth")
        ->capture_default_str();
    cmd->add_option("--min-leaf", min_leaf, "Minimum samples per leaf")
        ->capture_default_str();
    cmd->add_option("--feature-fraction", feature_fraction,
                    "Fraction of features sampled per split")
        ->check(CLI::Range(1e-9, 1.0))
        ->capture_default_str();
    cmd->add_flag("--per-venue-model", per_venue_model,
                  "Train one regression model per venue instead of a shared "
                  "one");
    cmd->add_flag("--anchor-initial", anchor_initial,
                  "Regularize refinements toward the initial weights instead "
                  "of the previous iterate");
    cmd->add_option("--threads", threads, "Worker threads for forest training")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  RankIns2Config config(std::uint64_t seed) const {
    RankIns2Config cfg;
    cfg.clusters = clusters;
    cfg.temporal.iterations = u;
    cfg.temporal.lambdas = lambdas.empty() ? std::vector<double>{200.0}
                                           : lambdas;
    cfg.temporal.anchor_initial = anchor_initial;
    cfg.forest.n_trees = trees;
    cfg.forest.max_depth = depth;
    cfg.forest.min_leaf = min_leaf;
    cfg.forest.feature_fraction = feature_fraction;
    cfg.per_venue_model = per_venue_model;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  }

  void describe(RunManifest& manifest, const CLI::App* cmd) const {
    manifest.add_config("clusters", std::to_string(clusters),
                        cmd->count("--clusters") > 0);
    manifest.add_config("u", std::to_string(u), cmd->count("--u") > 0);
    std::string ls;
    for (double l : (lambdas.empty() ? std::vector<double>{200.0} : lambdas)) {
      if (!ls.empty()) ls += ';';
      ls += format_double(l);
    }
    manifest.add_config("lambda", ls, cmd->count("--lambda") > 0);
    manifest.add_config("trees", std::to_string(trees),
                        cmd->count("--trees") > 0);
    manifest.add_config("depth", std::to_string(depth),
                        cmd->count("--depth") > 0);
    manifest.add_config("min_leaf", std::to_string(min_leaf),
                        cmd->count("--min-leaf") > 0);
    manifest.add_config("feature_fraction", format_double(feature_fraction),
                        cmd->count("--feature-fraction") > 0);
    manifest.add_config("per_venue_model", per_venue_model ? "true" : "false",
                        cmd->count("--per-venue-model") > 0);
    manifest.add_config("anchor_initial", anchor_initial ? "true" : "false",
                        cmd->count("--anchor-initial") > 0);
    manifest.add_config("threads", std::to_string(threads),
                        cmd->count("--threads") > 0);
  }
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Expands "--config FILE" into "--key=value" tokens injected right after the
// subcommand name. A key already given on the command line is not injected,
// so explicit flags take precedence over the file.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  std::vector<std::string> out;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      if (args[i].rfind("--", 0) == 0) {
        given.insert(args[i].substr(0, args[i].find('=')));
      }
      out.push_back(args[i]);
    }
  }
  if (config_path.empty()) return out;

  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot open config file: " + config_path);
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto pos = line.find('=');
    if (pos == std::string::npos) {
      throw UsageError("config line is not key=value: " + line);
    }
    const std::string key = trim(line.substr(0, pos));
    const std::string value = trim(line.substr(pos + 1));
    if (key.empty() || key == "config") {
      throw UsageError("bad config key in line: " + line);
    }
    if (given.count("--" + key)) continue;
    injected.push_back("--" + key + "=" + value);
  }

  std::size_t at = 0;  // first positional token is the subcommand
  while (at < out.size() && out[at].rfind('-', 0) == 0) ++at;
  if (at < out.size()) ++at;
  out.insert(out.begin() + at, injected.begin(), injected.end());
  return out;
}

std::pair<int, int> parse_year_range(const std::string& text) {
  auto pos = text.find(':');
  if (pos == std::string::npos) {
    throw UsageError("year range must look like 2010:2016");
  }
  try {
    return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 1))};
  } catch (const std::exception&) {
    throw UsageError("year range must look like 2010:2016");
  }
}

void write_ranking(const Ranking& ranking, const std::string& path) {
  TsvWriter w(path);
  std::size_t rank = 0;
  for (const auto& [inst, score] : ranking.entries()) {
    w.row({std::to_string(++rank), inst, format_double(score)});
  }
}

Ranking read_prediction(const std::string& path) {
  std::vector<std::pair<long, Ranking::Entry>> rows;
  read_tsv(path, 3, [&](const std::vector<std::string>& f, std::size_t line) {
    const std::string where = path + ":" + std::to_string(line);
    rows.emplace_back(parse_long(f[0], where),
                      Ranking::Entry{f[1], parse_double(f[2], where)});
  });
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Ranking::Entry> entries;
  entries.reserve(rows.size());
  for (auto& [rank, entry] : rows) {
    (void)rank;
    entries.push_back(std::move(entry));
  }
  return Ranking::from_ordered(std::move(entries));
}

int cmd_synth(CLI::App* cmd, const std::string& out_dir, const SynthConfig& cfg,
              std::uint64_t seed, const std::string& years_text) {
  Corpus corpus = generate_synthetic(cfg, seed);
  fs::create_directories(out_dir);
  CorpusPaths paths;
  paths.paper_file = out_dir + "/papers.tsv";
  paths.affiliation_file = out_dir + "/affiliations.tsv";
  paths.institution_file = out_dir + "/institutions.tsv";
  paths.venue_file = out_dir + "/venues.tsv";
  save_corpus(corpus, paths);

  RunManifest manifest("synth");
  manifest.add_config("m", std::to_string(cfg.m), cmd->count("--m") > 0);
  manifest.add_config("venues", std::to_string(cfg.n_venues),
                      cmd->count("--venues") > 0);
  manifest.add_config("years", years_text, cmd->count("--years") > 0);
  manifest.add_config("papers", std::to_string(cfg.papers_per_venue_year),
                      cmd->count("--papers") > 0);
  manifest.add_config("authors", std::to_string(cfg.author_pool),
                      cmd->count("--authors") > 0);
  manifest.add_config("vocab", std::to_string(cfg.vocab_size),
                      cmd->count("--vocab") > 0);
  manifest.add_config("drift", format_double(cfg.drift),
                      cmd->count("--drift") > 0);
  manifest.add_config("seed", std::to_string(seed), cmd->count("--seed") > 0);
  manifest.add_input(paths.paper_file);
  manifest.add_input(paths.affiliation_file);
  manifest.add_input(paths.institution_file);
  manifest.add_input(paths.venue_file);
  manifest.write(out_dir + "/corpus.manifest.tsv");

  std::cout << "wrote " << corpus.papers().size() << " papers to " << out_dir
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Institution ranking toolkit: fractional venue-year scoring, "
               "smoothed and matrix-based next-year prediction, NDCG "
               "evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // ---- synth ----------------------------------------------------------
  auto* synth = app.add_subcommand(
      "synth", "Generate a seeded synthetic corpus as the four TSV files");
  std::string config_file_doc;
  synth->add_option("--config", config_file_doc,
                    "Line-oriented key=value config; flags take precedence");
  std::string synth_out = "corpus";
  std::string years_text = "2009:2016";
  SynthConfig synth_cfg;
  std::uint64_t synth_seed = 1;
  std::string venue_names_csv;
  synth->add_option("--out-dir", synth_out, "Output directory")
      ->capture_default_str();
  synth->add_option("--m", synth_cfg.m, "Tracked institutions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--venues", synth_cfg.n_venues, "Venue count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--venue-names", venue_names_csv,
                    "Comma-separated venue ids (overrides --venues)");
  synth->add_option("--years", years_text, "Inclusive year range min:max")
      ->capture_default_str();
  synth->add_option("--papers", synth_cfg.papers_per_venue_year,
                    "Papers per venue-year")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("--authors", synth_cfg.author_pool, "Author pool size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--vocab", synth_cfg.vocab_size, "Keyword vocabulary size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--drift", synth_cfg.drift,
                    "Year-to-year share drift rate in [0,1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  synth->add_option("--seed", synth_seed, "Master seed")
      ->capture_default_str();

  // ---- rank -----------------------------------------------------------
  auto* rank = app.add_subcommand(
      "rank", "Predict a venue's institution ranking for a target year");
  rank->add_option("--config", config_file_doc,
                   "Line-oriented key=value config; flags take precedence");
  CorpusFlags rank_corpus;
  rank_corpus.attach(rank);
  std::string method;
  std::string rank_venue;
  int rank_target = 0;
  std::string rank_out = "ranking.tsv";
  std::size_t rank_top = 20;
  std::size_t rank_cutoff = 20;
  std::size_t grid_size = 20;
  std::uint64_t rank_seed = 1;
  RankIns2Flags rank_flags;
  rank->add_option("--method", method, "previous-year, rankins1 or rankins2")
      ->required()
      ->check(CLI::IsMember({"previous-year", "rankins1", "rankins2"}));
  rank->add_option("--venue", rank_venue, "Venue id")->required();
  rank->add_option("--target-year", rank_target, "Year to predict")
      ->required();
  rank->add_option("--out", rank_out, "Output ranking TSV")
      ->capture_default_str();
  rank->add_option("--top", rank_top, "Rows to write")->capture_default_str();
  rank->add_option("--cutoff", rank_cutoff, "NDCG cutoff for grid search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rank->add_option("--grid", grid_size, "Smoothing grid size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  rank->add_option("--seed", rank_seed, "Master seed")->capture_default_str();
  rank_flags.attach(rank);

  // ---- eval -----------------------------------------------------------
  auto* eval = app.add_subcommand(
      "eval", "Score a prediction TSV against the true venue-year table");
  eval->add_option("--config", config_file_doc,
                   "Line-oriented key=value config; flags take precedence");
  CorpusFlags eval_corpus;
  eval_corpus.attach(eval);
  std::string pred_path;
  std::string eval_venue;
  int eval_year = 0;
  std::size_t eval_n = 20;
  std::string eval_out;
  eval->add_option("--pred", pred_path,
                   "Prediction TSV [rank, institution, relevance]")
      ->required();
  eval->add_option("--venue", eval_venue, "Venue id")->required();
  eval->add_option("--year", eval_year, "Year of the truth table")->required();
  eval->add_option("--n", eval_n, "NDCG cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval->add_option("--out", eval_out,
                   "Optional report TSV; written with a manifest");

  // ---- validate -------------------------------------------------------
  auto* validate = app.add_subcommand(
      "validate",
      "Predict the validation year for every planned venue and method and "
      "score NDCG against the truth");
  validate->add_option("--config", config_file_doc,
                       "Line-oriented key=value config; flags take precedence");
  CorpusFlags val_corpus;
  val_corpus.attach(validate);
  std::string plan_path;
  std::string venues_csv;
  std::string methods_csv = "previous-year,rankins1,rankins2";
  int validation_year = 0;
  int val_target_year = 0;
  std::size_t val_cutoff = 20;
  std::size_t val_grid = 20;
  std::string out_prefix = "validation";
  std::uint64_t val_seed = 1;
  RankIns2Flags val_flags;
  validate->add_option("--plan", plan_path,
                       "Plan TSV [phase, venue]; default is the built-in "
                       "three-phase conference list");
  validate->add_option("--venues", venues_csv,
                       "Comma-separated venue ids (single-phase plan, "
                       "overrides --plan)");
  validate->add_option("--methods", methods_csv,
                       "Comma-separated methods; 'oracle' predicts the truth "
                       "itself (testing aid)")
      ->capture_default_str();
  validate->add_option("--validation-year", validation_year,
                       "Year to predict and score (default: corpus max year "
                       "- 1)");
  validate->add_option("--target-year", val_target_year,
                       "Final prediction year (default: validation year + 1)");
  validate->add_option("--cutoff", val_cutoff, "NDCG cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--grid", val_grid, "Smoothing grid size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate->add_option("--out-prefix", out_prefix,
                       "Report path prefix: <prefix>.tsv, <prefix>.csv")
      ->capture_default_str();
  validate->add_option("--seed", val_seed, "Master seed")
      ->capture_default_str();
  val_flags.attach(validate);

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 takes reversed args
    app.parse(std::move(args));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      auto [ymin, ymax] = parse_year_range(years_text);
      synth_cfg.year_min = ymin;
      synth_cfg.year_max = ymax;
      if (!venue_names_csv.empty()) {
        for (auto& name : split(venue_names_csv, ',')) {
          if (!name.empty()) synth_cfg.venue_names.push_back(name);
        }
      }
      try {
        return cmd_synth(synth, synth_out, synth_cfg, synth_seed, years_text);
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
    }

    if (rank->parsed()) {
      Corpus corpus = load_corpus(rank_corpus.paths());
      if (!corpus.has_venue(rank_venue)) {
        throw UsageError("unknown venue: " + rank_venue);
      }

      RunManifest manifest("rank");
      manifest.add_config("method", method, true);
      manifest.add_config("venue", rank_venue, true);
      manifest.add_config("target_year", std::to_string(rank_target), true);
      manifest.add_config("top", std::to_string(rank_top),
                          rank->count("--top") > 0);
      manifest.add_config("cutoff", std::to_string(rank_cutoff),
                          rank->count("--cutoff") > 0);
      manifest.add_config("grid", std::to_string(grid_size),
                          rank->count("--grid") > 0);
      manifest.add_config("seed", std::to_string(rank_seed),
                          rank->count("--seed") > 0);
      rank_flags.describe(manifest, rank);
      rank_corpus.add_inputs(manifest);

      RelevanceVector rel;
      if (method == "previous-year") {
        auto tables = score_history(corpus, rank_venue);
        rel = previous_year_baseline(tables, rank_venue, rank_target, corpus);
      } else if (method == "rankins1") {
        auto tables = score_history(corpus, rank_venue);
        RankIns1Result r =
            rankins1(tables, rank_venue, corpus, rank_target, rank_cutoff,
                     SmoothingGrid::make(grid_size));
        rel = r.relevance;
        manifest.add_config("chosen_beta", format_double(r.chosen_weight),
                            false);
      } else {
        RankIns2Result r = rankins2(corpus, rank_venue, rank_target,
                                    rank_flags.config(rank_seed));
        rel = r.relevance;
        export_weight_audit({{rank_venue, r.weights}},
                            rank_flags.config(rank_seed).temporal,
                            rank_out + ".weights.tsv");
      }

      write_ranking(Ranking::from_scores(rel.values).top(rank_top), rank_out);
      manifest.write(rank_out + ".manifest.tsv");
      std::cout << "wrote " << rank_out << "\n";
      return 0;
    }

    if (eval->parsed()) {
      Corpus corpus = load_corpus(eval_corpus.paths());
      if (!corpus.has_venue(eval_venue)) {
        throw UsageError("unknown venue: " + eval_venue);
      }
      Ranking prediction = read_prediction(pred_path);
      auto tables = score_history(corpus, eval_venue);
      auto it = tables.find(eval_year);
      const ScoreTable empty_table(eval_venue, eval_year, {}, 0);
      RelevanceVector truth = relevance_from_table(
          it == tables.end() ? empty_table : it->second, corpus, eval_year);
      const double score = ndcg_at(prediction, truth, eval_n);
      std::cout << "NDCG@" << eval_n << "\t" << format_double(score) << "\n";
      if (!eval_out.empty()) {
        TsvWriter w(eval_out);
        w.row({eval_venue, std::to_string(eval_year), std::to_string(eval_n),
               format_double(score)});
        w.close();
        RunManifest manifest("eval");
        manifest.add_config("venue", eval_venue, true);
        manifest.add_config("year", std::to_string(eval_year), true);
        manifest.add_config("n", std::to_string(eval_n),
                            eval->count("--n") > 0);
        manifest.add_input(pred_path);
        eval_corpus.add_inputs(manifest);
        manifest.write(eval_out + ".manifest.tsv");
      }
      return 0;
    }

    if (validate->parsed()) {
      Corpus corpus = load_corpus(val_corpus.paths());

      ExperimentPlan plan;
      if (!venues_csv.empty()) {
        std::vector<std::string> vs;
        for (auto& v : split(venues_csv, ',')) {
          if (!v.empty()) vs.push_back(v);
        }
        plan.phases = {{1, vs}};
      } else if (!plan_path.empty()) {
        std::map<int, std::vector<std::string>> by_phase;
        read_tsv(plan_path, 2,
                 [&](const std::vector<std::string>& f, std::size_t line) {
                   by_phase[static_cast<int>(parse_long(
                                f[0], plan_path + ":" + std::to_string(line)))]
                       .push_back(f[1]);
                 });
        for (auto& [phase, vs] : by_phase) plan.phases.emplace_back(phase, vs);
      } else {
        plan.phases = ExperimentPlan::default_phases();
      }
      plan.validation_year = validate->count("--validation-year") > 0
                                 ? validation_year
                                 : corpus.max_year() - 1;
      plan.target_year = validate->count("--target-year") > 0
                             ? val_target_year
                             : plan.validation_year + 1;
      plan.cutoff = val_cutoff;
      try {
        plan.check();
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }

      ValidationConfig vconfig;
      vconfig.rankins2 = val_flags.config(val_seed);
      vconfig.grid = SmoothingGrid::make(val_grid);
      vconfig.methods.clear();
      for (auto& name : split(methods_csv, ',')) {
        if (name.empty()) continue;
        auto m = method_from_name(name);
        if (!m) throw UsageError("unknown method: " + name);
        vconfig.methods.push_back(*m);
      }
      if (vconfig.methods.empty()) throw UsageError("no methods selected");

      EvaluationReport report = run_validation(corpus, plan, vconfig);
      export_report_tsv(report, out_prefix + ".tsv");
      export_report_csv(report, out_prefix + ".csv");

      std::vector<std::pair<std::string, WeightVector>> audit;
      for (const auto& cell : report.cells) {
        if (cell.method == "rankins2" && cell.year_weights.size() == 3) {
          audit.emplace_back(cell.venue_id,
                             WeightVector{cell.year_weights[0],
                                          cell.year_weights[1],
                                          cell.year_weights[2]});
        }
      }
      if (!audit.empty()) {
        export_weight_audit(audit, vconfig.rankins2.temporal,
                            out_prefix + ".weights.tsv");
      }

      RunManifest manifest("validate");
      manifest.add_config("validation_year",
                          std::to_string(plan.validation_year),
                          validate->count("--validation-year") > 0);
      manifest.add_config("target_year", std::to_string(plan.target_year),
                          validate->count("--target-year") > 0);
      manifest.add_config("cutoff", std::to_string(plan.cutoff),
                          validate->count("--cutoff") > 0);
      manifest.add_config("grid", std::to_string(val_grid),
                          validate->count("--grid") > 0);
      manifest.add_config("methods", methods_csv,
                          validate->count("--methods") > 0);
      manifest.add_config("seed", std::to_string(val_seed),
                          validate->count("--seed") > 0);
      val_flags.describe(manifest, validate);
      val_corpus.add_inputs(manifest);
      manifest.write(out_prefix + ".manifest.tsv");

      std::size_t ok = 0;
      for (const auto& c : report.cells) ok += c.ok ? 1 : 0;
      std::cout << "validation cells: " << ok << "/" << report.cells.size()
                << " ok; wrote " << out_prefix << ".tsv, " << out_prefix
                << ".csv\n";
      if (report.all_failed()) {
        std::cerr << "error: every validation cell failed\n";
        return 2;
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
