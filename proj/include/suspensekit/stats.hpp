// Descriptive statistics and one-sample tests.
#pragma once

#include <span>
#include <string>
#include <vector>

namespace sk {

struct Summary {
  long n = 0;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // sample sd; 0 when n == 1
  double min = 0.0;
  double max = 0.0;

  bool single() const noexcept { return n == 1; }
  double standard_error() const;
};

/// Throws on empty input.
Summary summarize(std::span<const double> values);

/// Linearly interpolated quantile (R type 7) of unsorted values.
double quantile(std::span<const double> values, double prob);

double pearson(std::span<const double> x, std::span<const double> y);

/// "***" below 0.01, "**" below 0.05, "*" below 0.1, else "".
std::string significance_stars(double p);

struct TTestResult {
  long n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double t = 0.0;
  double p_one_sided = 0.5;  // H1: mean < benchmark
  bool degenerate_variance = false;
  std::string stars;
};

/// One-sample t-test of mean < benchmark. Requires n >= 2. With zero
/// variance the statistic is +-inf (or 0) and the p-value 0, 1 (or 0.5).
TTestResult ttest_below(std::span<const double> values, double benchmark);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

}  // namespace sk
