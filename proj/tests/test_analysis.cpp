#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "oracles.hpp"
#include "suspensekit/analysis.hpp"

using namespace sk;

namespace {

MatchRecord rec(std::string id, std::string league, int season, std::string home, std::string away, double suspense,
                double surprise, ProbTriple pre = {0.4, 0.3, 0.3}) {
  MatchRecord r;
  r.match_id = std::move(id);
  r.league = std::move(league);
  r.season = season;
  r.home_team = std::move(home);
  r.away_team = std::move(away);
  r.suspense = suspense;
  r.surprise = surprise;
  r.pre_match = pre;
  return r;
}

// Log-linear data with a known season slope for every match.
std::vector<MatchRecord> trend_data(double slope, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.15);
  const std::vector<std::string> teams{"Ash", "Birch", "Cedar", "Elm", "Fir", "Oak", "Pine", "Yew"};
  std::vector<MatchRecord> out;
  int id = 0;
  for (int season = 2010; season <= 2019; ++season)
    for (const auto& h : teams)
      for (const auto& a : teams) {
        if (h == a) continue;
        const double x = season - 2010;
        out.push_back(rec("m" + std::to_string(id++), "L", season, h, a, std::exp(1.9 + slope * x + noise(gen)),
                          std::exp(0.2 + noise(gen))));
      }
  return out;
}

BenchmarkRange band(double suspense_low, double surprise_low) {
  BenchmarkRange r;
  r.suspense_low = suspense_low;
  r.surprise_low = surprise_low;
  r.suspense_high = suspense_low + 1.0;
  r.surprise_high = surprise_low + 1.0;
  return r;
}

}  // namespace

TEST_CASE("ols_cluster matches the explicit sandwich") {
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
    cl[i] = i % 3;
  }
  const auto r = ols_cluster(y, x, cl, {"c", "a", "b"});
  const auto o = oracle::cluster_sandwich(xo, yo, cl);
  CHECK(r.clusters == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(r.coefficients[j].estimate == doctest::Approx(o.beta[j]).epsilon(1e-8));
    for (int k = 0; k < 3; ++k) CHECK(r.vcov(j, k) == doctest::Approx(o.vcov[j][k]).epsilon(1e-8));
    CHECK(r.coefficients[j].se == doctest::Approx(std::sqrt(o.vcov[j][j])).epsilon(1e-8));
    const double t = o.beta[j] / std::sqrt(o.vcov[j][j]);
    CHECK(r.coefficients[j].p == doctest::Approx(2.0 * student_t_cdf(-std::abs(t), 2)).epsilon(1e-8));
  }
  CHECK(r.coef("a").name == "a");
  CHECK_THROWS(r.coef("missing"));
  // Residuals are orthogonal to every column.
  const Eigen::VectorXd xe = x.transpose() * r.residuals;
  CHECK(xe.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("singleton clusters reduce to HC1 up to the degrees of freedom") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z(0.0, 1.0);
  const int n = 25;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  std::vector<long> cl(n);
  for (int i = 0; i < n; ++i) {
    const double a = z(gen);
    x.row(i) << 1.0, a;
    y(i) = 2.0 - a + z(gen) * (1.0 + std::abs(a));
    cl[i] = i;
  }
  const auto c = ols_cluster(y, x, cl, {"c", "a"});
  const auto h = ols_hc1(y, x, {"c", "a"});
  CHECK((c.vcov - h.vcov).cwiseAbs().maxCoeff() < 1e-12);
  const double t = h.coefficients[1].t;
  CHECK(h.coefficients[1].p == doctest::Approx(2.0 * student_t_cdf(-std::abs(t), n - 2)).epsilon(1e-10));
  CHECK(c.coefficients[1].p == doctest::Approx(2.0 * student_t_cdf(-std::abs(t), n - 1)).epsilon(1e-10));
}

TEST_CASE("ols estimates do not change when every row is duplicated") {
  Eigen::MatrixXd x(6, 2), x2(12, 2);
  Eigen::VectorXd y(6), y2(12);
  for (int i = 0; i < 6; ++i) {
    x.row(i) << 1.0, i;
    y(i) = 1.0 + 0.5 * i + (i % 2 ? 0.3 : -0.2);
    x2.row(i) = x2.row(i + 6) = x.row(i);
    y2(i) = y2(i + 6) = y(i);
  }
  const auto a = ols_hc1(y, x, {"c", "s"});
  const auto b = ols_hc1(y2, x2, {"c", "s"});
  CHECK(a.coefficients[1].estimate == doctest::Approx(b.coefficients[1].estimate).epsilon(1e-12));
  CHECK(a.r2 == doctest::Approx(b.r2).epsilon(1e-12));
}

TEST_CASE("singular designs name the collinear columns") {
  Eigen::MatrixXd x(5, 3);
  Eigen::VectorXd y(5);
  for (int i = 0; i < 5; ++i) {
    x.row(i) << 1.0, i, 2.0 * i;
    y(i) = i;
  }
  try {
    ols_hc1(y, x, {"c", "s", "twice"});
    FAIL("expected a throw");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("'twice'") != std::string::npos);
  }
  CHECK_THROWS(ols_cluster(y, x.leftCols(2), std::vector<long>(5, 1), {"c", "s"}));
}

TEST_CASE("trend_ols recovers a known season slope") {
  const auto data = trend_data(-0.039, 17);
  const auto r = trend_ols(data, TrendModelSpec{Metric::suspense, 2010, {}});
  const auto& s = r.coef("Season");
  CHECK(std::abs(s.estimate + 0.039) < 3.0 * s.se);
  CHECK(s.stars == "***");
  CHECK(r.n == static_cast<long>(data.size()));
  CHECK(r.clusters == 28);

  const auto flat = trend_ols(data, TrendModelSpec{Metric::surprise, 2010, {}});
  CHECK(std::abs(flat.coef("Season").estimate) < 3.0 * flat.coef("Season").se);

  const auto with = trend_ols(data, TrendModelSpec{Metric::suspense, 2010, {"Oak", "Elm"}});
  REQUIRE(with.coefficients.size() == 6);
  CHECK(with.coefficients[2].name == "Oak");
  CHECK(with.coefficients[3].name == "Elm");
  CHECK(with.coefficients[4].name == "Oak × season");
  CHECK(with.coefficients[5].name == "Elm × season");
}

TEST_CASE("trend_ols input errors") {
  auto data = trend_data(0.0, 1);
  data[7].suspense = 0.0;
  try {
    trend_ols(data, TrendModelSpec{});
    FAIL("expected a throw");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find(data[7].match_id) != std::string::npos);
  }
  CHECK_THROWS(trend_ols(trend_data(0.0, 1), TrendModelSpec{Metric::suspense, 2010, {"Oak", "Oak"}}));
}

TEST_CASE("trend_table layouts") {
  const auto data = trend_data(-0.02, 9);
  const auto four = trend_table(data, {"Oak"}, 2010);
  CHECK(four.column_labels == std::vector<std::string>{"(1)", "(2)", "(3)", "(4)"});
  CHECK(four.column_metrics[2] == Metric::surprise);
  CHECK(four.column_interactions[1]);
  const auto two = trend_table(data, {}, 2010);
  CHECK(two.column_labels == std::vector<std::string>{"(1)", "(2)"});
  CHECK(two.column_metrics[1] == Metric::surprise);
}

TEST_CASE("team_pair_clusters ignore home and away order") {
  const std::vector<MatchRecord> r{rec("1", "L", 2020, "A", "B", 1, 1), rec("2", "L", 2020, "B", "A", 1, 1),
                                   rec("3", "L", 2020, "A", "C", 1, 1)};
  const auto c = team_pair_clusters(r);
  CHECK(c[0] == c[1]);
  CHECK(c[0] != c[2]);
}

TEST_CASE("describe: groups and edge cases") {
  const std::vector<MatchRecord> r{rec("1", "EPL", 2020, "A", "B", 6.0, 1.0), rec("2", "EPL", 2020, "B", "C", 8.0, 2.0),
                                   rec("3", "Liga", 2021, "A", "C", 4.0, 3.0)};
  const auto all = describe(r, GroupBy::all);
  REQUIRE(all.size() == 1);
  CHECK(all[0].suspense.mean == 6.0);

  const auto by_league = describe(r, GroupBy::league);
  REQUIRE(by_league.size() == 2);
  CHECK(by_league[0].key.league == "EPL");
  CHECK(by_league[0].suspense.n == 2);

  std::vector<std::string> warnings;
  const auto ts = describe(r, GroupBy::team_season, &warnings);
  const auto b2020 = std::find_if(ts.begin(), ts.end(), [](auto& g) { return g.key.team == "B" && g.key.season == 2020; });
  REQUIRE(b2020 != ts.end());
  CHECK(b2020->suspense.n == 2);
  CHECK_FALSE(warnings.empty());

  std::vector<std::string> empty_warn;
  CHECK(describe(std::vector<MatchRecord>{}, GroupBy::all, &empty_warn).empty());
  CHECK_FALSE(empty_warn.empty());

  auto shuffled = r;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto again = describe(shuffled, GroupBy::team_season);
  REQUIRE(again.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(again[i].key == ts[i].key);
    CHECK(again[i].suspense.mean == doctest::Approx(ts[i].suspense.mean));
  }
}

TEST_CASE("descriptive_table: pooled row first, tests only with n >= 2") {
  const std::vector<MatchRecord> r{rec("1", "Liga", 2020, "A", "B", 5.0, 1.0), rec("2", "EPL", 2020, "B", "C", 6.0, 1.1),
                                   rec("3", "EPL", 2021, "A", "C", 5.5, 1.3)};
  const auto rows = descriptive_table(r, 6.03, 1.17);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].label == "All leagues");
  CHECK(rows[2].label == "EPL");
  CHECK(rows[4].label == "Liga");
  CHECK(rows[0].test.has_value());
  CHECK(rows[0].benchmark == 6.03);
  CHECK(rows[1].metric == Metric::surprise);
  CHECK(rows[1].benchmark == 1.17);
  CHECK_FALSE(rows[4].test.has_value());
}

TEST_CASE("uncertainty_correlation") {
  std::vector<MatchRecord> r;
  for (int i = 0; i < 6; ++i) {
    const double gap = 0.1 * i;
    r.push_back(rec(std::to_string(i), "L", 2020, "A", "B", 8.0 - 2.0 * gap, 1.0 + gap * gap,
                    ProbTriple{0.35 + gap / 2, 0.3, 0.35 - gap / 2}));
  }
  const auto c = uncertainty_correlation(r);
  CHECK(c.suspense == doctest::Approx(-1.0));
  CHECK(c.surprise > 0.9);
  std::rotate(r.begin(), r.begin() + 2, r.end());
  CHECK(uncertainty_correlation(r).suspense == doctest::Approx(-1.0));
}

TEST_CASE("band_flags") {
  std::vector<MatchRecord> r;
  // 38 matches for "Top", mean 0.4 below the band with unit spread.
  for (int i = 0; i < 38; ++i)
    r.push_back(rec(std::to_string(i), "L", 2020, "Top", "Opp" + std::to_string(i), 5.6 + (i % 2 ? 1.0 : -1.0), 9.0));
  const auto flags = band_flags(r, band(6.0, 1.2));
  const auto top = std::find_if(flags.begin(), flags.end(),
                                [](auto& f) { return f.team == "Top" && f.metric == Metric::suspense; });
  REQUIRE(top != flags.end());
  CHECK(top->n == 38);
  CHECK(top->testable);
  CHECK(top->below);
  const auto sur = std::find_if(flags.begin(), flags.end(),
                                [](auto& f) { return f.team == "Top" && f.metric == Metric::surprise; });
  CHECK_FALSE(sur->below);
  const auto opp = std::find_if(flags.begin(), flags.end(), [](auto& f) { return f.team == "Opp3"; });
  CHECK(opp->n == 1);
  CHECK_FALSE(opp->testable);
  CHECK_FALSE(opp->below);
}

TEST_CASE("boxplot_rows") {
  const std::vector<MatchRecord> r{rec("1", "L", 2020, "Top", "X", 6.0, 1.0), rec("2", "L", 2020, "Y", "Top", 8.0, 2.0),
                                   rec("3", "L", 2020, "X", "Y", 4.0, 3.0), rec("4", "L", 2021, "Top", "Big", 5.0, 1.5)};
  const auto rows = boxplot_rows(r, {"Top", "Big"}, band(6.0, 1.2));
  auto find = [&](const std::string& g, int season) {
    return std::find_if(rows.begin(), rows.end(),
                        [&](auto& b) { return b.group == g && b.season == season && b.metric == Metric::suspense; });
  };
  REQUIRE(find("Top", 2020) != rows.end());
  CHECK(find("Top", 2020)->n == 2);
  CHECK(find("Top", 2020)->median == 7.0);
  CHECK(find("Other teams", 2020)->n == 3);
  CHECK(find("Other teams", 2021) == rows.end());
  CHECK(find("Big", 2021)->n == 1);
}
