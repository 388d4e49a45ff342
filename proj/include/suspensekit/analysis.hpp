// Statistics over scored matches: grouped descriptive tables, tests against
// the benchmark lower bound, correlation with pre-match uncertainty, and
// log-linear season trends with cluster-robust standard errors.
#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "suspensekit/benchmark.hpp"
#include "suspensekit/domain.hpp"
#include "suspensekit/stats.hpp"

namespace sk {

struct MatchRecord {
  std::string match_id;
  std::string league;
  int season = 0;  // start year of the season
  std::string date;
  std::string home_team;
  std::string away_team;
  double lambda_home = 0.0;
  double lambda_away = 0.0;
  double suspense = 0.0;
  double surprise = 0.0;
  ProbTriple pre_match;

  bool involves(const std::string& team) const { return home_team == team || away_team == team; }
  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

enum class Metric { suspense, surprise };

double metric_value(const MatchRecord& r, Metric m);
const char* metric_name(Metric m);

// ---------------------------------------------------------------------------
// Descriptive statistics

enum class GroupBy { all, league, team_season, league_season };

struct GroupKey {
  std::string league;  // empty unless grouped by league
  std::string team;    // empty unless grouped by team
  int season = -1;     // -1 unless grouped by season

  auto operator<=>(const GroupKey&) const = default;
};

struct GroupStats {
  GroupKey key;
  Summary suspense;
  Summary surprise;
};

/// Summary statistics per group. A team-season group holds every match the
/// team played in that season, home or away.
std::vector<GroupStats> describe(std::span<const MatchRecord> records, GroupBy group_by,
                                 std::vector<std::string>* warnings = nullptr);

struct DescriptiveRow {
  std::string label;  // league name or "All leagues"
  Metric metric;
  Summary summary;
  double benchmark = 0.0;
  std::optional<TTestResult> test;  // absent when n < 2
};

/// Rows of a descriptive table: all leagues pooled, then each league; each
/// with a one-sided test of mean < benchmark lower bound.
std::vector<DescriptiveRow> descriptive_table(std::span<const MatchRecord> records, double bm_suspense,
                                              double bm_surprise);

// ---------------------------------------------------------------------------
// Pre-match uncertainty

struct UncertaintyCorrelation {
  double suspense = 0.0;
  double surprise = 0.0;
};

/// Pearson correlation of |p_home - p_away| (pre-match) with each metric.
UncertaintyCorrelation uncertainty_correlation(std::span<const MatchRecord> records);

// ---------------------------------------------------------------------------
// Regression

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double t = 0.0;
  double p = 1.0;  // two-sided
  std::string stars;
};

struct RegressionResult {
  std::vector<Coefficient> coefficients;
  long n = 0;
  long k = 0;
  long clusters = 0;
  double r2 = 0.0;
  Eigen::MatrixXd vcov;
  Eigen::VectorXd residuals;

  const Coefficient& coef(const std::string& name) const;
};

/// OLS with Liang-Zeger cluster-robust covariance scaled by
/// G/(G-1) * (n-1)/(n-k). p-values use Student's t with G-1 degrees of
/// freedom. Throws naming the offending columns when X is rank deficient.
RegressionResult ols_cluster(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, std::span<const long> cluster,
                             const std::vector<std::string>& names);

/// OLS with heteroskedasticity-robust HC1 covariance, n/(n-k) scaling and
/// t(n-k) p-values.
RegressionResult ols_hc1(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const std::vector<std::string>& names);

struct TrendModelSpec {
  Metric outcome = Metric::suspense;
  int base_season = 2010;
  std::vector<std::string> top_teams;  // main effect and x season interaction each
};

/// Clusters: the unordered pair of teams.
std::vector<long> team_pair_clusters(std::span<const MatchRecord> records);

/// ln(outcome) on season (start year minus base_season); with top teams,
/// adds "<team>" (match involves team) and "<team> × season" columns.
RegressionResult trend_ols(std::span<const MatchRecord> records, const TrendModelSpec& spec);

struct TrendTable {
  std::vector<std::string> column_labels;  // "(1)", "(2)", ...
  std::vector<Metric> column_metrics;
  std::vector<bool> column_interactions;
  std::vector<RegressionResult> columns;
};

/// Columns (1) ln suspense, (2) with team terms, (3) ln surprise, (4) with
/// team terms. Without top teams only the two plain columns, labelled (1)
/// and (2).
TrendTable trend_table(std::span<const MatchRecord> records, const std::vector<std::string>& top_teams,
                       int base_season);

// ---------------------------------------------------------------------------
// Benchmark band comparisons

struct BandFlag {
  std::string team;
  int season = 0;
  Metric metric = Metric::suspense;
  long n = 0;
  double mean = 0.0;
  double benchmark = 0.0;
  double p = 1.0;
  bool testable = false;  // n >= 2
  bool below = false;     // p < alpha
};

/// One-sided tests of each team-season mean against the band's lower bound.
std::vector<BandFlag> band_flags(std::span<const MatchRecord> records, const BenchmarkRange& range,
                                 double alpha = 0.05);

struct BoxplotRow {
  std::string group;  // a top team, or "Other teams"
  int season = 0;
  Metric metric = Metric::suspense;
  long n = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  bool below = false;  // mean significantly below the band's lower bound
};

/// Box-plot source per (group, season). A top team's group holds its matches;
/// "Other teams" holds every match involving a team outside the list, once.
std::vector<BoxplotRow> boxplot_rows(std::span<const MatchRecord> records, const std::vector<std::string>& top_teams,
                                     const BenchmarkRange& range, double alpha = 0.05);

}  // namespace sk
