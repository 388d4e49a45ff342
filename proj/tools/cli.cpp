#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "suspensekit/analysis.hpp"
#include "suspensekit/benchmark.hpp"
#include "suspensekit/calibration.hpp"
#include "suspensekit/ingest.hpp"
#include "suspensekit/metrics.hpp"
#include "suspensekit/parallel.hpp"

#ifndef SUSPENSEKIT_VERSION
#define SUSPENSEKIT_VERSION "0.0.0"
#endif
#ifndef SUSPENSEKIT_DEFAULT_DATA_DIR
#define SUSPENSEKIT_DEFAULT_DATA_DIR "data"
#endif

namespace sk::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultWeightsFile = "weights_epl_fixture.csv";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path data_dir() {
  if (const char* env = std::getenv(kDataDirEnv); env && *env) return env;
  return SUSPENSEKIT_DEFAULT_DATA_DIR;
}

// Existing path as given, else the same relative path under the data directory.
fs::path resolve_input(const std::string& name, const char* what) {
  if (name.empty()) throw UsageError(std::string("--") + what + " is required");
  const fs::path p(name);
  if (fs::exists(p)) return p;
  if (p.is_relative() && fs::exists(data_dir() / p)) return data_dir() / p;
  throw UsageError(std::string(what) + " file not found: " + name);
}

// "# suspensekit <version> <command> --flag=value ..." with output paths and
// --threads left out, so it is identical for identical results.
std::string provenance(const CLI::App& sub) {
  std::ostringstream s;
  s << "# suspensekit " << SUSPENSEKIT_VERSION << ' ' << sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "threads" || name == "out" || name == "append") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      if (opt->get_items_expected_max() == 0) value = "true";
    } else {
      value = opt->get_default_str();
      if (value == "{}") value.clear();
      if (opt->get_items_expected_max() == 0) value = "false";
    }
    s << " --" << name << '=' << value;
  }
  return s.str();
}

class OutputFile {
 public:
  OutputFile(const fs::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << header << '\n';
  }
  ~OutputFile() = default;
  std::ostream& operator*() { return out_; }
  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed: " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir.empty() ? "." : dir);
  fs::create_directories(p);
  return p;
}

std::string fmt(double v) { return format_double(v); }

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return std::string(buf) == "-0.000" ? "0.000" : buf;
}

std::string summary_cells(const Summary& s) {
  return std::to_string(s.n) + ',' + fmt(s.mean) + ',' + fmt(s.median) + ',' + fmt(s.sd) + ',' + fmt(s.min) + ',' +
         fmt(s.max);
}

struct WeightsFlags {
  std::string path;
  std::string league;
  bool uniform = false;

  void add(CLI::App* app) {
    app->add_option("--weights", path, "minute-weights CSV (league,minute,weight)");  // default set by caller
    app->add_option("--weights-league", league, "league to take from a multi-league weights file");
    app->add_flag("--uniform-weights", uniform, "use uniform minute weights");
  }

  // Weights for one simulation run.
  MinuteWeights single() const {
    if (uniform) return MinuteWeights::uniform();
    const auto all = load_weights(resolve_input(path, "weights"));
    if (!league.empty()) {
      auto it = all.find(league);
      if (it == all.end()) throw UsageError("league '" + league + "' not in weights file");
      return it->second;
    }
    if (all.size() != 1) throw UsageError("weights file holds several leagues; pick one with --weights-league");
    return all.begin()->second;
  }
};

BeliefTiming parse_timing(const std::string& s) {
  return s == "end" ? BeliefTiming::end_of_minute : BeliefTiming::start_of_minute;
}

// FNV-1a, so a match keeps its Monte Carlo stream whatever the file order.
std::uint64_t match_key(const std::string& id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string timeline_string(const MatchTimeline& tl) {
  std::string out;
  for (const auto& e : tl.events()) {
    if (!out.empty()) out += ';';
    out += std::to_string(e.minute) + (e.team == Side::home ? ":H:" : ":A:") +
           (e.kind == EventKind::goal ? "goal" : "red");
  }
  return out;
}

// ---------------------------------------------------------------------------

struct BenchmarkCmd {
  double step = 0.1, grid_min = 0.0, grid_max = 5.0, lambda_low = 0.5, lambda_high = 2.5;
  int matches = 10000;
  std::uint64_t seed = 7;
  std::string timing = "start", out;
  bool no_grid = false, ordered = false;
  WeightsFlags weights;

  void add(CLI::App* app) {
    app->add_option("--step", step, "grid step")->check(CLI::PositiveNumber);
    app->add_option("--grid-min", grid_min, "smallest grid rate")->check(CLI::Range(0.0, kMaxRate));
    app->add_option("--grid-max", grid_max, "largest grid rate")->check(CLI::Range(0.0, kMaxRate));
    app->add_option("--matches", matches, "simulated matches per rate pair")->check(CLI::PositiveNumber);
    app->add_option("--lambda-low", lambda_low, "low balanced rate of the benchmark range")
        ->check(CLI::Range(0.0, kMaxRate));
    app->add_option("--lambda-high", lambda_high, "high balanced rate of the benchmark range")
        ->check(CLI::Range(0.0, kMaxRate));
    app->add_option("--seed", seed, "global seed");
    app->add_option("--timing", timing, "belief timing")->check(CLI::IsMember({"start", "end"}));
    app->add_flag("--no-grid", no_grid, "only compute the benchmark range");
    app->add_flag("--ordered", ordered, "simulate (a,b) and (b,a) separately");
    weights.path = kDefaultWeightsFile;
    weights.add(app);
    app->add_option("--out", out, "output directory");
  }

  int run(const std::string& header, unsigned threads, std::ostream& log) const {
    if (grid_min > grid_max) throw UsageError("--grid-min exceeds --grid-max");
    if (lambda_low > lambda_high) throw UsageError("--lambda-low exceeds --lambda-high");
    const auto w = weights.single();
    const fs::path dir = prepare_dir(out);
    const RngSeedPolicy policy{seed};
    const BeliefTiming bt = parse_timing(timing);

    if (!no_grid) {
      const GridSpec spec{grid_min, grid_max, step, matches, !ordered};
      const auto grid = simulate_grid(spec, w, policy, {bt, threads});
      OutputFile summary(dir / "grid_summary.csv", header);
      *summary << "lambda_home,lambda_away,suspense_n,suspense_mean,suspense_median,suspense_sd,suspense_min,"
                  "suspense_max,surprise_n,surprise_mean,surprise_median,surprise_sd,surprise_min,surprise_max\n";
      for (const auto& r : grid)
        *summary << fmt(r.lambda_home) << ',' << fmt(r.lambda_away) << ',' << summary_cells(r.suspense) << ','
                 << summary_cells(r.surprise) << '\n';
      summary.close();
      OutputFile heat(dir / "heatmap.csv", header);
      *heat << "lambda_home,lambda_away,mean_suspense,mean_surprise\n";
      for (const auto& c : surface_export(grid))
        *heat << fmt(c.lambda_home) << ',' << fmt(c.lambda_away) << ',' << fmt(c.mean_suspense) << ','
              << fmt(c.mean_surprise) << '\n';
      heat.close();
    }

    const auto range = benchmark_range(w, policy, lambda_low, lambda_high, matches, bt);
    OutputFile rf(dir / "benchmark_range.csv", header);
    *rf << "metric,lower,upper,lambda_low,lambda_high\n";
    *rf << "suspense," << fmt(range.suspense_low) << ',' << fmt(range.suspense_high) << ',' << fmt(lambda_low) << ','
        << fmt(lambda_high) << '\n';
    *rf << "surprise," << fmt(range.surprise_low) << ',' << fmt(range.surprise_high) << ',' << fmt(lambda_low) << ','
        << fmt(lambda_high) << '\n';
    rf.close();
    OutputFile tf(dir / "benchmark_table.csv", header);
    *tf << "lambda,metric,n,mean,median,sd,min,max\n";
    for (const auto* row : {&range.low_row, &range.high_row}) {
      *tf << fmt(row->lambda_home) << ",suspense," << summary_cells(row->suspense) << '\n';
      *tf << fmt(row->lambda_home) << ",surprise," << summary_cells(row->surprise) << '\n';
    }
    tf.close();

    log << "suspense range [" << fixed3(range.suspense_low) << ", " << fixed3(range.suspense_high)
        << "], surprise range [" << fixed3(range.surprise_low) << ", " << fixed3(range.surprise_high) << "]\n";
    return kExitOk;
  }
};

struct SimulateCmd {
  double lambda_home = 1.0, lambda_away = 1.0;
  int matches = 1000, reps = kFastReplications;
  std::uint64_t seed = 7;
  std::string timing = "start", engine = "analytic", out;
  WeightsFlags weights;

  void add(CLI::App* app) {
    app->add_option("--lambda-home", lambda_home, "home scoring rate")->check(CLI::Range(0.0, kMaxRate));
    app->add_option("--lambda-away", lambda_away, "away scoring rate")->check(CLI::Range(0.0, kMaxRate));
    app->add_option("--matches", matches, "number of matches")->check(CLI::PositiveNumber);
    app->add_option("--engine", engine, "probability engine")->check(CLI::IsMember({"analytic", "mc"}));
    app->add_option("--reps", reps, "Monte Carlo replications per probability")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "global seed");
    app->add_option("--timing", timing, "belief timing")->check(CLI::IsMember({"start", "end"}));
    weights.path = kDefaultWeightsFile;
    weights.add(app);
    app->add_option("--out", out, "output CSV (default simulate.csv)");
  }

  int run(const std::string& header, unsigned threads, std::ostream& log) const {
    const auto w = weights.single();
    const ScoringRates rates(lambda_home, lambda_away);
    const auto schedule = RateSchedule::build(rates, w);
    const OutcomeTable table(schedule, 0, 0);
    const RngSeedPolicy policy{seed};
    const auto stream = pair_stream(policy, lambda_home, lambda_away);

    ExcitementOptions opts;
    opts.timing = parse_timing(timing);
    if (engine == "mc") {
      opts.engine = Engine::monte_carlo;
      opts.mc = {reps, policy, 1};
    }
    std::vector<MatchTimeline> timelines(matches);
    std::vector<MatchExcitement> results(matches);
    parallel_for(static_cast<std::size_t>(matches), threads, [&](std::size_t m) {
      timelines[m] = simulate_match(schedule, stream.substream(m));
      if (opts.engine == Engine::analytic) {
        results[m] = excitement_from_table(timelines[m], table, opts.timing);
      } else {
        ExcitementOptions o = opts;
        o.match_index = m;
        results[m] = excitement(timelines[m], rates, w, o);
      }
    });

    const fs::path path = out.empty() ? fs::path("simulate.csv") : fs::path(out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    OutputFile f(path, header);
    *f << "match,home_goals,away_goals,events,suspense,surprise\n";
    std::vector<double> sus, sur;
    for (int m = 0; m < matches; ++m) {
      *f << m << ',' << timelines[m].goals(Side::home) << ',' << timelines[m].goals(Side::away) << ','
         << timeline_string(timelines[m]) << ',' << fmt(results[m].suspense) << ',' << fmt(results[m].surprise)
         << '\n';
      sus.push_back(results[m].suspense);
      sur.push_back(results[m].surprise);
    }
    f.close();
    log << "mean suspense " << fixed3(summarize(sus).mean) << ", mean surprise " << fixed3(summarize(sur).mean)
        << " over " << matches << " matches\n";
    return kExitOk;
  }
};

struct ScoreCmd {
  std::string matches_path, odds_path, engine = "analytic", timing = "start", out;
  std::vector<std::string> leagues;
  std::vector<int> seasons;
  int reps = kFastReplications;
  std::uint64_t seed = 7;
  bool append = false;
  WeightsFlags weights;

  void add(CLI::App* app) {
    app->add_option("--matches", matches_path, "matches CSV")->required();
    app->add_option("--odds", odds_path, "odds CSV")->required();
    weights.add(app);
    app->add_option("--engine", engine, "probability engine")->check(CLI::IsMember({"analytic", "mc"}));
    app->add_option("--reps", reps, "Monte Carlo replications per probability")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "global seed (Monte Carlo engine)");
    app->add_option("--timing", timing, "belief timing")->check(CLI::IsMember({"start", "end"}));
    app->add_option("--league", leagues, "only these leagues")->delimiter(',');
    app->add_option("--season", seasons, "only these seasons (start year)")->delimiter(',');
    app->add_option("--out", out, "excitement CSV (default excitement.csv)");
    app->add_flag("--append", append, "append rows to an existing excitement file");
  }

  std::map<std::string, MinuteWeights> weights_for(const std::vector<MatchRow>& rows) const {
    std::map<std::string, MinuteWeights> out_map;
    if (weights.uniform) {
      for (const auto& r : rows) out_map.emplace(r.meta.league, MinuteWeights::uniform());
      return out_map;
    }
    if (weights.path.empty()) return estimate_weights(rows);
    const auto file = load_weights(resolve_input(weights.path, "weights"));
    for (const auto& r : rows) {
      const std::string& league = weights.league.empty() ? r.meta.league : weights.league;
      auto it = file.find(league);
      if (it == file.end()) throw UsageError("no weights for league '" + league + "'");
      out_map.emplace(r.meta.league, it->second);
    }
    return out_map;
  }

  int run(const std::string& header, unsigned threads, std::ostream& log) const {
    const auto mpath = resolve_input(matches_path, "matches");
    const auto opath = resolve_input(odds_path, "odds");
    std::vector<MatchRow> rows;
    for (auto& r : load_matches(mpath))
      if (DatasetManifest{{}, {}, {}, leagues, seasons, {}}.accepts(r.meta.league, r.meta.season))
        rows.push_back(std::move(r));
    const auto joined = join_odds(rows, load_odds(opath));
    const auto wmap = weights_for(rows);

    ExcitementOptions opts;
    opts.timing = parse_timing(timing);
    if (engine == "mc") {
      opts.engine = Engine::monte_carlo;
      opts.mc = {reps, RngSeedPolicy{seed}, 1};
    }

    struct Outcome {
      std::optional<MatchRecord> record;
      std::string issue, detail;
    };
    std::vector<Outcome> results(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
      const auto& row = rows[i];
      auto it = joined.by_match.find(row.meta.match_id);
      if (it == joined.by_match.end()) {
        results[i].issue = "no_odds";
        results[i].detail = "excluded from scoring";
        return;
      }
      try {
        const auto fit = calibrate(deoverround(it->second));
        if (fit.flagged) {
          results[i].issue = "calibration_flagged";
          results[i].detail = fit.diagnostic;
        }
        ExcitementOptions o = opts;
        o.match_index = match_key(row.meta.match_id);
        const auto e = excitement(row.timeline, fit.rates, wmap.at(row.meta.league), o);
        MatchRecord rec = row.meta;
        rec.lambda_home = fit.rates.home();
        rec.lambda_away = fit.rates.away();
        rec.pre_match = e.prob_path[0];
        rec.suspense = e.suspense;
        rec.surprise = e.surprise;
        results[i].record = rec;
      } catch (const std::exception& ex) {
        results[i].issue = "failed";
        results[i].detail = ex.what();
      }
    });

    std::vector<MatchRecord> records;
    for (const auto& r : results)
      if (r.record) records.push_back(*r.record);
    const fs::path path = out.empty() ? fs::path("excitement.csv") : fs::path(out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    persist_excitement(path, records, {header.substr(2)}, append);

    fs::path diag_path = path;
    diag_path += ".diagnostics.csv";
    OutputFile diag(diag_path, header);
    *diag << "match_id,issue,detail\n";
    long issues = 0;
    for (const auto& id : joined.unmatched_odds) {
      *diag << csv_escape(id) << ",odds_without_match,odds row has no match\n";
      ++issues;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (results[i].issue.empty()) continue;
      *diag << csv_escape(rows[i].meta.match_id) << ',' << results[i].issue << ',' << csv_escape(results[i].detail)
            << '\n';
      ++issues;
    }
    diag.close();
    log << "scored " << records.size() << " of " << rows.size() << " matches; " << issues << " diagnostics in "
        << diag_path.string() << '\n';
    return kExitOk;
  }
};

struct CalibrateCmd {
  std::string odds_path, out;

  void add(CLI::App* app) {
    app->add_option("--odds", odds_path, "odds CSV")->required();
    app->add_option("--out", out, "output CSV (default calibration.csv)");
  }

  int run(const std::string& header, unsigned threads, std::ostream& log) const {
    const auto odds = load_odds(resolve_input(odds_path, "odds"));
    std::vector<CalibrationResult> fits(odds.size());
    parallel_for(odds.size(), threads, [&](std::size_t i) { fits[i] = calibrate(deoverround(odds[i])); });
    const fs::path path = out.empty() ? fs::path("calibration.csv") : fs::path(out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    OutputFile f(path, header);
    *f << "match_id,lambda_home,lambda_away,objective,initial_objective,iterations,converged,flagged,diagnostic\n";
    long flagged = 0;
    for (std::size_t i = 0; i < odds.size(); ++i) {
      const auto& r = fits[i];
      flagged += r.flagged;
      *f << csv_escape(odds[i].match_id) << ',' << fmt(r.rates.home()) << ',' << fmt(r.rates.away()) << ','
         << fmt(r.objective) << ',' << fmt(r.initial_objective) << ',' << r.iterations << ','
         << (r.converged ? "true" : "false") << ',' << (r.flagged ? "true" : "false") << ','
         << csv_escape(r.diagnostic) << '\n';
    }
    f.close();
    log << "calibrated " << odds.size() << " matches, " << flagged << " flagged\n";
    return kExitOk;
  }
};

struct TrendsCmd {
  std::string excitement_path, out;
  std::vector<std::string> leagues, top_teams;
  int base_season = 2010;
  double bm_suspense = 6.03, bm_surprise = 1.17, alpha = 0.05;

  void add(CLI::App* app) {
    app->add_option("--excitement", excitement_path, "excitement CSV from `score`")->required();
    app->add_option("--league", leagues, "only these leagues")->delimiter(',');
    app->add_option("--top-teams", top_teams, "teams with their own main effect and season slope")->delimiter(',');
    app->add_option("--base-season", base_season, "season coded as 0");
    app->add_option("--bm-suspense", bm_suspense, "benchmark lower bound for suspense");
    app->add_option("--bm-surprise", bm_surprise, "benchmark lower bound for surprise");
    app->add_option("--alpha", alpha, "level of the one-sided band tests")->check(CLI::Range(0.0, 1.0));
    app->add_option("--out", out, "output directory");
  }

  int run(const std::string& header, unsigned /*threads*/, std::ostream& log) const {
    std::vector<MatchRecord> records;
    for (auto& r : load_excitement(resolve_input(excitement_path, "excitement")))
      if (leagues.empty() || std::find(leagues.begin(), leagues.end(), r.league) != leagues.end())
        records.push_back(std::move(r));
    if (records.empty()) throw std::runtime_error("no excitement records after filtering");
    const fs::path dir = prepare_dir(out);

    OutputFile desc(dir / "descriptive.csv", header);
    *desc << "league,metric,n,mean,median,sd,min,max,bm,below_bm,t,p_one_sided\n";
    for (const auto& row : descriptive_table(records, bm_suspense, bm_surprise)) {
      *desc << csv_escape(row.label) << ',' << metric_name(row.metric) << ',' << row.summary.n << ','
            << fmt(row.summary.mean) << ',' << fmt(row.summary.median) << ',' << fmt(row.summary.sd) << ','
            << fmt(row.summary.min) << ',' << fmt(row.summary.max) << ',' << fmt(row.benchmark) << ','
            << (row.test ? row.test->stars : "") << ',' << (row.test ? fmt(row.test->t) : "") << ','
            << (row.test ? fmt(row.test->p_one_sided) : "") << '\n';
    }
    desc.close();

    const auto corr = uncertainty_correlation(records);
    OutputFile cf(dir / "correlation.csv", header);
    *cf << "metric,pearson_abs_prematch_gap\n";
    *cf << "Suspense," << fmt(corr.suspense) << "\nSurprise," << fmt(corr.surprise) << '\n';
    cf.close();

    const auto table = trend_table(records, top_teams, base_season);
    OutputFile lf(dir / "trends.csv", header);
    *lf << "column,outcome,team_terms,term,estimate,se,t,p,stars,n,clusters,r2\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& res = table.columns[c];
      for (const auto& co : res.coefficients)
        *lf << table.column_labels[c] << ",ln_" << (table.column_metrics[c] == Metric::suspense ? "suspense" : "surprise")
            << ',' << (table.column_interactions[c] ? "yes" : "no") << ',' << csv_escape(co.name) << ','
            << fmt(co.estimate) << ',' << fmt(co.se) << ',' << fmt(co.t) << ',' << fmt(co.p) << ',' << co.stars << ','
            << res.n << ',' << res.clusters << ',' << fmt(res.r2) << '\n';
    }
    lf.close();

    // Wide layout: slopes with stars, standard errors in the row below.
    OutputFile wf(dir / "trend_table.csv", header);
    *wf << "term";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      *wf << ',' << (table.column_metrics[c] == Metric::suspense ? "Ln(suspense) " : "Ln(surprise) ")
          << table.column_labels[c];
    *wf << '\n';
    std::vector<std::string> terms{"Season"};
    for (const auto& t : top_teams) terms.push_back(t + " × season");
    for (const auto& term : terms) {
      std::string est = csv_escape(term), se;
      for (const auto& res : table.columns) {
        auto it = std::find_if(res.coefficients.begin(), res.coefficients.end(),
                               [&](const Coefficient& c) { return c.name == term; });
        est += ',' + (it == res.coefficients.end() ? "" : fixed3(it->estimate) + it->stars);
        se += ',' + (it == res.coefficients.end() ? "" : "(" + fixed3(it->se) + ")");
      }
      *wf << est << '\n' << se << '\n';
    }
    *wf << "Main effects";
    for (std::size_t c = 0; c < table.columns.size(); ++c) *wf << ',' << (table.column_interactions[c] ? "Yes" : "");
    *wf << "\nObservations";
    for (const auto& res : table.columns) *wf << ',' << res.n;
    *wf << "\nR2";
    for (const auto& res : table.columns) *wf << ',' << fixed3(res.r2);
    *wf << '\n';
    wf.close();

    BenchmarkRange band;
    band.suspense_low = bm_suspense;
    band.surprise_low = bm_surprise;
    OutputFile bf(dir / "band_flags.csv", header);
    *bf << "team,season,metric,n,mean,bm,p_one_sided,testable,below\n";
    for (const auto& f : band_flags(records, band, alpha))
      *bf << csv_escape(f.team) << ',' << f.season << ',' << metric_name(f.metric) << ',' << f.n << ',' << fmt(f.mean)
          << ',' << fmt(f.benchmark) << ',' << (f.testable ? fmt(f.p) : "") << ',' << (f.testable ? "true" : "false")
          << ',' << (f.below ? "true" : "false") << '\n';
    bf.close();

    OutputFile xf(dir / "boxplot.csv", header);
    *xf << "group,season,metric,n,mean,min,q1,median,q3,max,below_bm\n";
    for (const auto& r : boxplot_rows(records, top_teams, band, alpha))
      *xf << csv_escape(r.group) << ',' << r.season << ',' << metric_name(r.metric) << ',' << r.n << ',' << fmt(r.mean)
          << ',' << fmt(r.min) << ',' << fmt(r.q1) << ',' << fmt(r.median) << ',' << fmt(r.q3) << ',' << fmt(r.max)
          << ',' << (r.below ? "true" : "false") << '\n';
    xf.close();

    log << "trends over " << records.size() << " matches written to " << dir.string() << '\n';
    return kExitOk;
  }
};

struct WeightsCmd {
  std::string matches_path, out;
  std::vector<std::string> leagues;

  void add(CLI::App* app) {
    app->add_option("--matches", matches_path, "matches CSV")->required();
    app->add_option("--league", leagues, "only these leagues")->delimiter(',');
    app->add_option("--out", out, "output CSV (default weights.csv)");
  }

  int run(const std::string& header, unsigned /*threads*/, std::ostream& log) const {
    std::vector<MatchRow> rows;
    for (auto& r : load_matches(resolve_input(matches_path, "matches")))
      if (leagues.empty() || std::find(leagues.begin(), leagues.end(), r.meta.league) != leagues.end())
        rows.push_back(std::move(r));
    const auto w = estimate_weights(rows);
    const fs::path path = out.empty() ? fs::path("weights.csv") : fs::path(out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    OutputFile f(path, header);
    write_weights(*f, w);
    f.close();
    log << "weights for " << w.size() << " league(s) from " << rows.size() << " matches\n";
    return kExitOk;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Suspense and surprise of football matches modelled as Poisson scoring processes", "suspensekit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", SUSPENSEKIT_VERSION);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads, 0 = all cores; never changes results");

  BenchmarkCmd benchmark;
  SimulateCmd simulate;
  ScoreCmd score;
  CalibrateCmd calibrate_cmd;
  TrendsCmd trends;
  WeightsCmd weights;
  auto* s_benchmark = app.add_subcommand("benchmark", "balanced-match benchmark range and rate grid");
  auto* s_simulate = app.add_subcommand("simulate", "simulate matches at fixed rates");
  auto* s_score = app.add_subcommand("score", "calibrate rates from odds and score observed matches");
  auto* s_calibrate = app.add_subcommand("calibrate", "scoring rates from odds");
  auto* s_trends = app.add_subcommand("trends", "descriptive tables, band tests and season trends");
  auto* s_weights = app.add_subcommand("weights", "estimate league minute weights from matches");
  for (auto* s : {s_benchmark, s_simulate, s_score, s_calibrate, s_trends, s_weights})
    s->add_option("--threads", threads, "worker threads, 0 = all cores; never changes results");
  benchmark.add(s_benchmark);
  simulate.add(s_simulate);
  score.add(s_score);
  calibrate_cmd.add(s_calibrate);
  trends.add(s_trends);
  weights.add(s_weights);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << SUSPENSEKIT_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*s_benchmark) return benchmark.run(provenance(*s_benchmark), threads, out);
    if (*s_simulate) return simulate.run(provenance(*s_simulate), threads, out);
    if (*s_score) return score.run(provenance(*s_score), threads, out);
    if (*s_calibrate) return calibrate_cmd.run(provenance(*s_calibrate), threads, out);
    if (*s_trends) return trends.run(provenance(*s_trends), threads, out);
    if (*s_weights) return weights.run(provenance(*s_weights), threads, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace sk::cli
