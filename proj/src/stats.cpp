#include "suspensekit/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sk {

double Summary::standard_error() const { return n > 0 ? sd / std::sqrt(static_cast<double>(n)) : 0.0; }

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summary of an empty sample");
  Summary s;
  s.n = static_cast<long>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = s.n > 1 ? std::sqrt(ss / (s.n - 1)) : 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.median = quantile(values, 0.5);
  return s;
}

double quantile(std::span<const double> values, double prob) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (prob < 0.0 || prob > 1.0) throw std::invalid_argument("quantile probability outside [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = (v.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - lo) * (v[hi] - v[lo]);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson needs two equally long samples of size >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

double student_t_cdf(double t, double df) {
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::students_t(df), t);
}

TTestResult ttest_below(std::span<const double> values, double benchmark) {
  if (values.size() < 2) throw std::invalid_argument("t-test needs at least two observations");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("t-test on non-finite value");
  const Summary s = summarize(values);
  TTestResult r;
  r.n = s.n;
  r.mean = s.mean;
  r.sd = s.sd;
  const double gap = s.mean - benchmark;
  if (s.sd == 0.0) {
    r.degenerate_variance = true;
    r.t = gap == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), gap);
    r.p_one_sided = gap == 0.0 ? 0.5 : (gap < 0.0 ? 0.0 : 1.0);
  } else {
    r.t = gap / (s.sd / std::sqrt(static_cast<double>(s.n)));
    r.p_one_sided = student_t_cdf(r.t, static_cast<double>(s.n - 1));
  }
  r.stars = significance_stars(r.p_one_sided);
  return r;
}

}  // namespace sk
