#include "suspensekit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sk {

namespace {

constexpr const char* kAllLeagues = "All leagues";
constexpr const char* kOtherTeams = "Other teams";

std::vector<double> values_of(std::span<const MatchRecord> records, const std::vector<std::size_t>& idx, Metric m) {
  std::vector<double> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(metric_value(records[i], m));
  return out;
}

double two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  return 2.0 * student_t_cdf(-std::abs(t), df);
}

// Names of columns that add nothing to the rank of the columns before them.
std::vector<std::string> collinear_columns(const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::MatrixXd sub(x.rows(), static_cast<Eigen::Index>(kept.size()) + 1);
    for (std::size_t c = 0; c < kept.size(); ++c) sub.col(c) = x.col(kept[c]);
    sub.col(sub.cols() - 1) = x.col(j);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() == sub.cols())
      kept.push_back(j);
    else
      out.push_back(names[j]);
  }
  return out;
}

struct OlsCore {
  Eigen::VectorXd beta;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd bread;  // (X'X)^-1
  double r2 = 0.0;
};

OlsCore fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
  if (x.rows() != y.size()) throw std::invalid_argument("design and outcome lengths differ");
  if (static_cast<std::size_t>(x.cols()) != names.size()) throw std::invalid_argument("one name per column required");
  if (x.rows() <= x.cols()) throw std::invalid_argument("need more observations than regressors");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < x.cols()) {
    std::ostringstream msg;
    msg << "singular design; collinear columns:";
    for (const auto& n : collinear_columns(x, names)) msg << " '" << n << "'";
    throw std::invalid_argument(msg.str());
  }
  OlsCore core;
  core.beta = qr.solve(y);
  core.residuals = y - x * core.beta;
  const Eigen::MatrixXd xtx = x.transpose() * x;
  core.bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
  const double ybar = y.mean();
  const double sst = (y.array() - ybar).square().sum();
  core.r2 = sst > 0.0 ? 1.0 - core.residuals.squaredNorm() / sst : 0.0;
  return core;
}

RegressionResult finish(const OlsCore& core, Eigen::MatrixXd vcov, const std::vector<std::string>& names, long n,
                        long clusters, double df) {
  RegressionResult r;
  r.n = n;
  r.k = static_cast<long>(names.size());
  r.clusters = clusters;
  r.r2 = core.r2;
  r.residuals = core.residuals;
  for (std::size_t j = 0; j < names.size(); ++j) {
    Coefficient c;
    c.name = names[j];
    c.estimate = core.beta(j);
    c.se = std::sqrt(std::max(0.0, vcov(j, j)));
    c.t = c.se > 0.0 ? c.estimate / c.se : (c.estimate == 0.0 ? 0.0 : std::copysign(INFINITY, c.estimate));
    c.p = two_sided_p(c.t, df);
    c.stars = significance_stars(c.p);
    r.coefficients.push_back(std::move(c));
  }
  r.vcov = std::move(vcov);
  return r;
}

}  // namespace

double metric_value(const MatchRecord& r, Metric m) { return m == Metric::suspense ? r.suspense : r.surprise; }

const char* metric_name(Metric m) { return m == Metric::suspense ? "Suspense" : "Surprise"; }

std::vector<GroupStats> describe(std::span<const MatchRecord> records, GroupBy group_by,
                                 std::vector<std::string>* warnings) {
  std::map<GroupKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    switch (group_by) {
      case GroupBy::all:
        groups[{}].push_back(i);
        break;
      case GroupBy::league:
        groups[{r.league, "", -1}].push_back(i);
        break;
      case GroupBy::league_season:
        groups[{r.league, "", r.season}].push_back(i);
        break;
      case GroupBy::team_season:
        groups[{"", r.home_team, r.season}].push_back(i);
        if (r.away_team != r.home_team) groups[{"", r.away_team, r.season}].push_back(i);
        break;
    }
  }
  if (groups.empty() && warnings) warnings->push_back("no records to describe");
  std::vector<GroupStats> out;
  for (const auto& [key, idx] : groups) {
    out.push_back({key, summarize(values_of(records, idx, Metric::suspense)),
                   summarize(values_of(records, idx, Metric::surprise))});
    if (warnings && idx.size() == 1) {
      std::ostringstream msg;
      msg << "group " << key.league << key.team << (key.season >= 0 ? " " + std::to_string(key.season) : "")
          << " has a single match; sd reported as 0";
      warnings->push_back(msg.str());
    }
  }
  return out;
}

std::vector<DescriptiveRow> descriptive_table(std::span<const MatchRecord> records, double bm_suspense,
                                              double bm_surprise) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> blocks;
  blocks.emplace_back(kAllLeagues, std::vector<std::size_t>{});
  std::map<std::string, std::vector<std::size_t>> by_league;
  for (std::size_t i = 0; i < records.size(); ++i) {
    blocks.front().second.push_back(i);
    by_league[records[i].league].push_back(i);
  }
  for (auto& [league, idx] : by_league) blocks.emplace_back(league, std::move(idx));

  std::vector<DescriptiveRow> rows;
  for (const auto& [label, idx] : blocks) {
    if (idx.empty()) continue;
    for (Metric m : {Metric::suspense, Metric::surprise}) {
      const auto v = values_of(records, idx, m);
      DescriptiveRow row{label, m, summarize(v), m == Metric::suspense ? bm_suspense : bm_surprise, std::nullopt};
      if (v.size() >= 2) row.test = ttest_below(v, row.benchmark);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

UncertaintyCorrelation uncertainty_correlation(std::span<const MatchRecord> records) {
  std::vector<double> gap, sus, sur;
  for (const auto& r : records) {
    gap.push_back(std::abs(r.pre_match.home - r.pre_match.away));
    sus.push_back(r.suspense);
    sur.push_back(r.surprise);
  }
  return {pearson(gap, sus), pearson(gap, sur)};
}

const Coefficient& RegressionResult::coef(const std::string& name) const {
  for (const auto& c : coefficients)
    if (c.name == name) return c;
  throw std::out_of_range("no coefficient named '" + name + "'");
}

RegressionResult ols_cluster(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, std::span<const long> cluster,
                             const std::vector<std::string>& names) {
  if (static_cast<Eigen::Index>(cluster.size()) != y.size())
    throw std::invalid_argument("one cluster id per observation required");
  const OlsCore core = fit(y, x, names);
  std::map<long, Eigen::VectorXd> scores;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    auto [it, fresh] = scores.try_emplace(cluster[i], Eigen::VectorXd::Zero(x.cols()));
    it->second += x.row(i).transpose() * core.residuals(i);
  }
  const long g = static_cast<long>(scores.size());
  if (g < 2) throw std::invalid_argument("cluster-robust covariance needs at least two clusters");
  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  for (const auto& [id, s] : scores) meat += s * s.transpose();
  const double n = static_cast<double>(x.rows()), k = static_cast<double>(x.cols());
  const double c = (g / (g - 1.0)) * ((n - 1.0) / (n - k));
  Eigen::MatrixXd vcov = c * core.bread * meat * core.bread;
  return finish(core, std::move(vcov), names, x.rows(), g, static_cast<double>(g - 1));
}

RegressionResult ols_hc1(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, const std::vector<std::string>& names) {
  const OlsCore core = fit(y, x, names);
  Eigen::MatrixXd meat = x.transpose() * core.residuals.array().square().matrix().asDiagonal() * x;
  const double n = static_cast<double>(x.rows()), k = static_cast<double>(x.cols());
  Eigen::MatrixXd vcov = (n / (n - k)) * core.bread * meat * core.bread;
  return finish(core, std::move(vcov), names, x.rows(), x.rows(), n - k);
}

std::vector<long> team_pair_clusters(std::span<const MatchRecord> records) {
  std::map<std::pair<std::string, std::string>, long> ids;
  std::vector<long> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    auto key = std::minmax(r.home_team, r.away_team);
    auto [it, fresh] = ids.try_emplace({key.first, key.second}, static_cast<long>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

RegressionResult trend_ols(std::span<const MatchRecord> records, const TrendModelSpec& spec) {
  if (std::set<std::string>(spec.top_teams.begin(), spec.top_teams.end()).size() != spec.top_teams.size())
    throw std::invalid_argument("top teams must be distinct");
  std::vector<std::string> bad;
  for (const auto& r : records)
    if (!(metric_value(r, spec.outcome) > 0.0)) bad.push_back(r.match_id);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "log of non-positive " << metric_name(spec.outcome) << " in matches:";
    for (const auto& id : bad) msg << ' ' << id;
    throw std::invalid_argument(msg.str());
  }

  std::vector<std::string> names{"Intercept", "Season"};
  for (const auto& t : spec.top_teams) names.push_back(t);
  for (const auto& t : spec.top_teams) names.push_back(t + " × season");

  const auto n = static_cast<Eigen::Index>(records.size());
  const auto teams = static_cast<Eigen::Index>(spec.top_teams.size());
  Eigen::VectorXd y(n);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, 2 + 2 * teams);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[i];
    const double season = r.season - spec.base_season;
    y(i) = std::log(metric_value(r, spec.outcome));
    x(i, 0) = 1.0;
    x(i, 1) = season;
    for (Eigen::Index j = 0; j < teams; ++j) {
      if (!r.involves(spec.top_teams[j])) continue;
      x(i, 2 + j) = 1.0;
      x(i, 2 + teams + j) = season;
    }
  }
  return ols_cluster(y, x, team_pair_clusters(records), names);
}

TrendTable trend_table(std::span<const MatchRecord> records, const std::vector<std::string>& top_teams,
                       int base_season) {
  TrendTable table;
  int label = 1;
  for (Metric m : {Metric::suspense, Metric::surprise}) {
    for (bool with_teams : {false, true}) {
      if (with_teams && top_teams.empty()) continue;
      TrendModelSpec spec{m, base_season, with_teams ? top_teams : std::vector<std::string>{}};
      table.columns.push_back(trend_ols(records, spec));
      table.column_labels.push_back("(" + std::to_string(label++) + ")");
      table.column_metrics.push_back(m);
      table.column_interactions.push_back(with_teams);
    }
  }
  return table;
}

std::vector<BandFlag> band_flags(std::span<const MatchRecord> records, const BenchmarkRange& range, double alpha) {
  std::vector<BandFlag> out;
  for (const auto& g : describe(records, GroupBy::team_season)) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (records[i].season == g.key.season && records[i].involves(g.key.team)) idx.push_back(i);
    for (Metric m : {Metric::suspense, Metric::surprise}) {
      BandFlag f;
      f.team = g.key.team;
      f.season = g.key.season;
      f.metric = m;
      f.n = static_cast<long>(idx.size());
      f.benchmark = m == Metric::suspense ? range.suspense_low : range.surprise_low;
      const auto v = values_of(records, idx, m);
      f.mean = summarize(v).mean;
      if (v.size() >= 2) {
        f.testable = true;
        f.p = ttest_below(v, f.benchmark).p_one_sided;
        f.below = f.p < alpha;
      }
      out.push_back(f);
    }
  }
  return out;
}

std::vector<BoxplotRow> boxplot_rows(std::span<const MatchRecord> records, const std::vector<std::string>& top_teams,
                                     const BenchmarkRange& range, double alpha) {
  const std::set<std::string> top(top_teams.begin(), top_teams.end());
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    for (const auto& t : top_teams)
      if (r.involves(t)) groups[{t, r.season}].push_back(i);
    if (!top.contains(r.home_team) || !top.contains(r.away_team)) groups[{kOtherTeams, r.season}].push_back(i);
  }
  std::vector<BoxplotRow> out;
  for (const auto& [key, idx] : groups) {
    for (Metric m : {Metric::suspense, Metric::surprise}) {
      const auto v = values_of(records, idx, m);
      BoxplotRow row;
      row.group = key.first;
      row.season = key.second;
      row.metric = m;
      row.n = static_cast<long>(v.size());
      const Summary s = summarize(v);
      row.mean = s.mean;
      row.min = s.min;
      row.max = s.max;
      row.median = s.median;
      row.q1 = quantile(v, 0.25);
      row.q3 = quantile(v, 0.75);
      if (v.size() >= 2)
        row.below = ttest_below(v, m == Metric::suspense ? range.suspense_low : range.surprise_low).p_one_sided < alpha;
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace sk
