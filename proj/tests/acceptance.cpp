// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"
#include "oracles.hpp"
#include "suspensekit/analysis.hpp"
#include "suspensekit/benchmark.hpp"
#include "suspensekit/calibration.hpp"
#include "suspensekit/ingest.hpp"
#include "suspensekit/montecarlo.hpp"

using namespace sk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "MISS ") + what;
  }
};

std::string num(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double se_diff(const Summary& a, const Summary& b) {
  return std::sqrt(a.standard_error() * a.standard_error() + b.standard_error() * b.standard_error());
}

const MinuteWeights& weights() {
  static const MinuteWeights w(oracle::fixture_weights());
  return w;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// First non-comment line of a CSV file.
std::string header_of(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') return line;
  return {};
}

std::vector<std::string> first_column(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::string> out;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') out.push_back(split_csv_line(line)[0]);
  return out;
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  if (code != 0) std::fprintf(stderr, "cli failed (%d): %s\n", code, err.str().c_str());
  return code;
}

// Decimal odds for model probabilities with a multiplicative margin, capped
// per market so that every price stays above 1.
OddsRecord priced(const std::string& id, const ScoringRates& rates, double margin) {
  const auto m = model_probs(rates);
  auto eff = [&](std::initializer_list<double> ps) {
    return std::max(1.0, std::min(margin, 1.0 / (1.01 * std::max(ps))));
  };
  OddsRecord r;
  r.match_id = id;
  const double e = eff({m.outcome.home, m.outcome.draw, m.outcome.away});
  r.home_odds = 1.0 / (m.outcome.home * e);
  r.draw_odds = 1.0 / (m.outcome.draw * e);
  r.away_odds = 1.0 / (m.outcome.away * e);
  for (const auto& t : m.totals) {
    const double eo = eff({t.p_over, 1.0 - t.p_over});
    r.ou_lines.push_back({t.threshold, 1.0 / (t.p_over * eo), 1.0 / ((1.0 - t.p_over) * eo)});
  }
  return r;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto r = benchmark_range(weights(), RngSeedPolicy{7}, 0.5, 2.5, 10'000);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& lo = r.low_row;
  const auto& hi = r.high_row;
  o.require(std::abs(lo.suspense.mean - 6.89) <= 0.15, "sus(0.5) " + num(lo.suspense.mean) + " vs 6.89±0.15");
  o.require(std::abs(lo.surprise.mean - 1.17) <= 0.05, "sur(0.5) " + num(lo.surprise.mean) + " vs 1.17±0.05");
  o.require(std::abs(hi.suspense.mean - 6.03) <= 0.15, "sus(2.5) " + num(hi.suspense.mean) + " vs 6.03±0.15");
  o.require(std::abs(hi.surprise.mean - 1.74) <= 0.05, "sur(2.5) " + num(hi.surprise.mean) + " vs 1.74±0.05");
  o.require(std::abs(lo.suspense.median - 7.32) <= 0.2, "med sus(0.5) " + num(lo.suspense.median) + " vs 7.32±0.2");
  o.require(std::abs(lo.surprise.median - 1.01) <= 0.2, "med sur(0.5) " + num(lo.surprise.median) + " vs 1.01±0.2");
  o.require(std::abs(hi.suspense.median - 6.45) <= 0.2, "med sus(2.5) " + num(hi.suspense.median) + " vs 6.45±0.2");
  o.require(std::abs(hi.surprise.median - 1.55) <= 0.2, "med sur(2.5) " + num(hi.surprise.median) + " vs 1.55±0.2");
  o.require(secs <= 300.0, "runtime " + num(secs, 1) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto s = simulate_pair(0.0, 0.0, 10'000, weights(), RngSeedPolicy{7});
  const bool zero = std::all_of(s.suspense.begin(), s.suspense.end(), [](double v) { return v == 0.0; }) &&
                    std::all_of(s.surprise.begin(), s.surprise.end(), [](double v) { return v == 0.0; });
  o.require(zero, "10000 matches at (0,0) all exactly zero");
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<Summary> sus, sur;
  std::vector<double> lambdas;
  for (int i = 1; i <= 50; ++i) {
    const double lam = i / 10.0;
    const auto s = simulate_pair(lam, lam, 2'000, weights(), RngSeedPolicy{7});
    lambdas.push_back(lam);
    sus.push_back(summarize(s.suspense));
    sur.push_back(summarize(s.surprise));
  }
  const std::size_t at_half = 4;
  std::size_t argmax = 0;
  int sus_bad = 0, sur_bad = 0, sus_viol = 0, sur_viol = 0;
  for (std::size_t i = 0; i < sus.size(); ++i) {
    if (sus[i].mean > sus[argmax].mean) argmax = i;
    if (i != at_half && sus[i].mean > sus[at_half].mean) {
      ++sus_viol;
      sus_bad += sus[i].mean - sus[at_half].mean > 2.0 * se_diff(sus[i], sus[at_half]);
    }
    for (std::size_t j = i + 1; j < sur.size(); ++j)
      if (sur[j].mean < sur[i].mean) {
        ++sur_viol;
        sur_bad += sur[i].mean - sur[j].mean > 2.0 * se_diff(sur[i], sur[j]);
      }
  }
  o.require(sus_bad == 0, "suspense argmax at lambda " + num(lambdas[argmax], 1) + ", " + std::to_string(sus_viol) +
                              " excess over lambda 0.5, " + std::to_string(sus_bad) + " beyond 2 SE");
  o.require(sur_bad == 0, "surprise " + std::to_string(sur_viol) + " order violations, " + std::to_string(sur_bad) +
                              " beyond 2 SE");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const int n = 40'000;
  auto pair = [&](double h, double a) {
    const auto s = simulate_pair(h, a, n, weights(), RngSeedPolicy{7});
    return std::pair{summarize(s.suspense), summarize(s.surprise)};
  };
  const auto [sus10, sur10] = pair(1.0, 1.0);
  const auto [sus14, sur14] = pair(1.4, 1.0);
  const auto [sus3, sur3] = pair(3.0, 1.5);
  const double dsus = sus10.mean - sus14.mean, dsur = sur14.mean - sur10.mean;
  o.require(dsus >= 2.0 * se_diff(sus10, sus14),
            "suspense drop " + num(dsus, 4) + " (" + num(dsus / se_diff(sus10, sus14), 1) + " SE)");
  o.require(dsur >= 2.0 * se_diff(sur10, sur14),
            "surprise rise " + num(dsur, 4) + " (" + num(dsur / se_diff(sur10, sur14), 1) + " SE)");
  o.require(std::abs(sur10.mean - sur3.mean) <= 0.05,
            "surprise (1,1) " + num(sur10.mean) + " vs (3,1.5) " + num(sur3.mean));
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> rate(0.0, 5.0);
  std::uniform_int_distribution<int> minute(0, 89), goals(0, 3), cards(0, 1);
  const int reps = 100'000;
  int components = 0, inside = 0;
  for (int c = 0; c < 200; ++c) {
    const ScoringRates rates(rate(gen), rate(gen));
    const MatchState st{minute(gen), goals(gen), goals(gen), cards(gen), cards(gen)};
    const auto schedule = RateSchedule::build(rates, weights());
    const auto exact = outcome_probs(st, schedule);
    McConfig cfg;
    cfg.replications = reps;
    cfg.seed_policy = RngSeedPolicy{7};
    const auto mc = mc_outcome_probs(st, schedule, cfg, cfg.seed_policy.match_stream(c));
    for (auto f : {&ProbTriple::home, &ProbTriple::draw, &ProbTriple::away}) {
      const double p = exact.*f;
      ++components;
      inside += std::abs(mc.*f - p) <= 3.0 * std::sqrt(p * (1.0 - p) / reps) + 1e-12;
    }
  }
  const double share = static_cast<double>(inside) / components;
  o.require(share >= 0.99, std::to_string(inside) + "/" + std::to_string(components) + " components within 3 SE (" +
                               num(100.0 * share, 1) + "%)");
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (double margin : {1.0, 1.05, 1.08}) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        const double h = 0.2 + 0.2 * i, a = 0.2 + 0.2 * j;
        const auto fit = calibrate(deoverround(priced("g", ScoringRates(h, a), margin)));
        worst = std::max({worst, std::abs(fit.rates.home() - h), std::abs(fit.rates.away() - a)});
      }
    o.require(worst <= 0.05, "margin " + num(margin, 2) + " max error " + num(worst, 6));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z(0.0, 1.0);
    const int n = 30;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    std::vector<long> cl(n);
    oracle::Matrix xo(n, std::vector<double>(3));
    std::vector<double> yo(n);
    for (int i = 0; i < n; ++i) {
      const double a = z(gen), b = z(gen);
      x.row(i) << 1.0, a, b;
      xo[i] = {1.0, a, b};
      y(i) = yo[i] = 0.5 + 1.5 * a - 0.7 * b + z(gen) * (1 + i % 3);
      cl[i] = i / 10;
    }
    const auto r = ols_cluster(y, x, cl, {"c", "a", "b"});
    const auto ref = oracle::cluster_sandwich(xo, yo, cl);
    double rel = 0.0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) rel = std::max(rel, std::abs(r.vcov(j, k) - ref.vcov[j][k]) / std::abs(ref.vcov[j][k]));
    o.require(rel <= 1e-8, "sandwich max rel diff " + std::to_string(rel));
  }
  {
    // n = 2 and n = 3 give t with 1 and 2 degrees of freedom.
    double gap = 0.0;
    for (double shift : {-3.0, -0.4, 0.0, 0.7, 2.5}) {
      const std::vector<double> two{1.0 + shift, 2.0 + shift}, three{1.0 + shift, 2.5 + shift, 4.0 + shift};
      const auto t1 = ttest_below(two, 1.5);
      const auto t2 = ttest_below(three, 2.5);
      gap = std::max(gap, std::abs(t1.p_one_sided - (0.5 + std::atan(t1.t) / M_PI)));
      gap = std::max(gap, std::abs(t2.p_one_sided - (0.5 + t2.t / (2.0 * std::sqrt(2.0 + t2.t * t2.t)))));
    }
    o.require(gap <= 1e-10, "t-test p max gap " + std::to_string(gap));
  }
  {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> noise(0.0, 0.15);
    const std::vector<std::string> teams{"Ash", "Birch", "Cedar", "Elm", "Fir", "Oak", "Pine", "Yew"};
    std::vector<MatchRecord> recs;
    int id = 0;
    for (int season = 2010; season <= 2019; ++season)
      for (const auto& h : teams)
        for (const auto& a : teams) {
          if (h == a) continue;
          const double x = season - 2010;
          const bool oak = h == "Oak" || a == "Oak";
          MatchRecord r;
          r.match_id = std::to_string(id++);
          r.season = season;
          r.home_team = h;
          r.away_team = a;
          r.suspense = std::exp(1.9 - 0.01 * x + (oak ? 0.2 - 0.039 * x : 0.0) + noise(gen));
          r.surprise = std::exp(0.2 + noise(gen));
          recs.push_back(r);
        }
    const auto fit = trend_ols(recs, TrendModelSpec{Metric::suspense, 2010, {"Oak"}});
    const auto& c = fit.coef("Oak × season");
    o.require(std::abs(c.estimate + 0.039) <= 3.0 * c.se,
              "interaction " + num(c.estimate, 4) + " (se " + num(c.se, 4) + ") vs -0.039");
  }
  return o;
}

Outcome criterion8(const fs::path& tmp) {
  Outcome o;
  const std::string data = SK_TEST_DATA_DIR;
  struct Cmd {
    std::string name;
    std::vector<std::string> args;
    std::vector<std::string> files;
  };
  const std::vector<Cmd> cmds{
      {"benchmark",
       {"benchmark", "--step", "0.5", "--grid-max", "2", "--matches", "200", "--seed", "11"},
       {"grid_summary.csv", "heatmap.csv", "benchmark_range.csv", "benchmark_table.csv"}},
      {"simulate", {"simulate", "--lambda-home", "1.7", "--matches", "50", "--engine", "mc", "--reps", "2000"}, {}},
      {"score",
       {"score", "--matches", data + "/synthetic_matches.csv", "--odds", data + "/synthetic_odds.csv", "--engine", "mc",
        "--reps", "5000"},
       {}},
      {"calibrate", {"calibrate", "--odds", data + "/synthetic_odds.csv"}, {}},
  };
  for (const auto& c : cmds) {
    const bool dir_output = !c.files.empty();
    std::vector<std::string> outputs;
    bool ok = true;
    for (const auto& [run, threads] : {std::pair{"a", "1"}, {"b", "1"}, {"c", "3"}}) {
      auto args = c.args;
      const fs::path out = tmp / (c.name + "_" + run + (dir_output ? "" : ".csv"));
      args.insert(args.end(), {"--threads", threads, "--out", out.string()});
      ok &= cli(args) == 0;
      std::string all;
      for (const auto& f : dir_output ? c.files : std::vector<std::string>{""})
        all += slurp(f.empty() ? out : out / f);
      if (c.name == "score") all += slurp(out.string() + ".diagnostics.csv");
      outputs.push_back(all);
    }
    const bool same = ok && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    o.require(same, c.name + (same ? " identical" : " differs"));
  }
  return o;
}

// A synthetic league with known scoring rates, taken through score and trends.
Outcome criterion9(const fs::path& tmp) {
  Outcome o;
  const std::vector<std::string> teams{"Ash", "Birch", "Cedar", "Elm", "Fir", "Oak"};
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> rate(0.5, 2.5);
  std::ofstream mf(tmp / "league_matches.csv"), of(tmp / "league_odds.csv");
  mf << "match_id,league,season,date,home,away,events\n";
  of << "match_id,odds_h,odds_d,odds_a,threshold,over,under\n";
  std::map<std::string, ScoringRates> truth;
  int id = 0;
  for (int season = 2015; season <= 2018; ++season)
    for (const auto& h : teams)
      for (const auto& a : teams) {
        if (h == a) continue;
        const std::string mid = "lg-" + std::to_string(id);
        const ScoringRates rates(rate(gen), rate(gen));
        truth.emplace(mid, rates);
        const auto tl = simulate_match(rates, weights(), RngSeedPolicy{9}.match_stream(id++));
        std::string events;
        for (const auto& e : tl.events())
          events += (events.empty() ? "" : ";") + std::to_string(e.minute) + (e.team == Side::home ? ":H:goal" : ":A:goal");
        mf << mid << ",SYN," << season << ',' << season << "-10-01," << h << ',' << a << ',' << events << '\n';
        const auto odds = priced(mid, rates, 1.05);
        for (const auto& l : odds.ou_lines)
          of << mid << ',' << format_double(odds.home_odds) << ',' << format_double(odds.draw_odds) << ','
             << format_double(odds.away_odds) << ',' << format_double(l.threshold) << ','
             << format_double(l.over_odds) << ',' << format_double(l.under_odds) << '\n';
      }
  mf.close();
  of.close();

  const fs::path scored = tmp / "league_scored.csv";
  o.require(cli({"score", "--matches", (tmp / "league_matches.csv").string(), "--odds",
                 (tmp / "league_odds.csv").string(), "--weights", std::string(SK_TEST_DATA_DIR) + "/weights_epl_fixture.csv",
                 "--weights-league", "EPL", "--out", scored.string()}) == 0,
            "score ran");
  const auto recs = load_excitement(scored);
  double worst = 0.0;
  for (const auto& r : recs)
    worst = std::max({worst, std::abs(r.lambda_home - truth.at(r.match_id).home()),
                      std::abs(r.lambda_away - truth.at(r.match_id).away())});
  o.require(recs.size() == truth.size() && worst < 1e-3,
            std::to_string(recs.size()) + " matches scored, rate error " + num(worst, 6));

  const fs::path out = tmp / "league_trends";
  o.require(cli({"trends", "--excitement", scored.string(), "--top-teams", "Oak,Elm", "--base-season", "2015", "--out",
                 out.string()}) == 0,
            "trends ran");
  o.require(header_of(out / "descriptive.csv") == "league,metric,n,mean,median,sd,min,max,bm,below_bm,t,p_one_sided",
            "descriptive layout");
  const auto labels = first_column(out / "descriptive.csv");
  o.require(labels.size() == 5 && labels[1] == "All leagues" && labels[3] == "SYN", "descriptive rows");
  o.require(header_of(out / "correlation.csv") == "metric,pearson_abs_prematch_gap", "correlation layout");
  const auto wide_header = header_of(out / "trend_table.csv");
  o.require(wide_header.find("(1)") != std::string::npos && wide_header.find("(4)") != std::string::npos,
            "trend table columns (1)-(4)");
  const auto terms = first_column(out / "trend_table.csv");
  auto has = [&](const std::string& t) { return std::find(terms.begin(), terms.end(), t) != terms.end(); };
  o.require(has("Season") && has("Oak × season") && has("Elm × season") && has("Observations") && has("R2"),
            "trend table rows");
  o.require(fs::exists(out / "trends.csv") && fs::exists(out / "band_flags.csv") && fs::exists(out / "boxplot.csv"),
            "trends, band and box-plot files");

  std::vector<double> gap, sus;
  for (const auto& r : recs) {
    gap.push_back(std::abs(r.pre_match.home - r.pre_match.away));
    sus.push_back(r.suspense);
  }
  const double corr = pearson(gap, sus);
  o.require(corr < 0.0, "suspense vs pre-match gap correlation " + num(corr));
  return o;
}

}  // namespace

int main() {
  const fs::path tmp = fs::temp_directory_path() / ("sk_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 balanced-match benchmark values", criterion1},
      {"2 zero rates give zero excitement", criterion2},
      {"3 shape along the diagonal", criterion3},
      {"4 suspense/surprise trade-off", criterion4},
      {"5 Monte Carlo vs analytic probabilities", criterion5},
      {"6 calibration round trip", criterion6},
      {"7 statistics oracles", criterion7},
      {"8 byte-identical CLI output", [&] { return criterion8(tmp); }},
      {"9 table layouts on a synthetic league", [&] { return criterion9(tmp); }},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::printf("criterion %s: %s (%s) [%.1f s]\n", name.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  fs::remove_all(tmp);
  return failed == 0 ? 0 : 1;
}
