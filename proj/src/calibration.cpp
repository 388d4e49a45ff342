#include "suspensekit/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "suspensekit/analytic.hpp"

namespace sk {

namespace {

constexpr double kDefaultTotal = 2.6;

void require_odds(double odds, const std::string& what, const std::string& id) {
  if (!std::isfinite(odds) || odds <= 1.0) {
    std::ostringstream msg;
    msg << "match " << id << ": " << what << " odds " << odds << " must exceed 1";
    throw std::invalid_argument(msg.str());
  }
}

// P(N > threshold) for N ~ Poisson(mean), threshold = k + 0.5.
double poisson_over(double mean, double threshold) {
  const int k = static_cast<int>(std::floor(threshold));
  if (mean <= 0.0) return 0.0;
  double term = std::exp(-mean), cdf = term;
  for (int i = 1; i <= k; ++i) {
    term *= mean / i;
    cdf += term;
  }
  return std::max(0.0, 1.0 - cdf);
}

}  // namespace

bool is_half_integer_threshold(double threshold) noexcept {
  const double twice = threshold * 2.0;
  return threshold >= kMinThreshold && threshold <= kMaxThreshold && twice == std::floor(twice) &&
         static_cast<long>(twice) % 2 == 1;
}

void OddsRecord::validate() const {
  require_odds(home_odds, "home", match_id);
  require_odds(draw_odds, "draw", match_id);
  require_odds(away_odds, "away", match_id);
  std::set<double> seen;
  for (const auto& line : ou_lines) {
    if (!is_half_integer_threshold(line.threshold))
      throw std::invalid_argument("match " + match_id + ": threshold " + std::to_string(line.threshold) +
                                  " is not a half-integer in [0.5, 5.5]");
    if (!seen.insert(line.threshold).second)
      throw std::invalid_argument("match " + match_id + ": duplicate threshold " + std::to_string(line.threshold));
    require_odds(line.over_odds, "over", match_id);
    require_odds(line.under_odds, "under", match_id);
  }
}

ImpliedProbs deoverround(const OddsRecord& record) {
  record.validate();
  ImpliedProbs out;
  const double ih = 1.0 / record.home_odds, id = 1.0 / record.draw_odds, ia = 1.0 / record.away_odds;
  const double book = ih + id + ia;
  out.outcome = {ih / book, id / book, ia / book};
  for (const auto& line : record.ou_lines) {
    const double io = 1.0 / line.over_odds, iu = 1.0 / line.under_odds;
    out.totals.push_back({line.threshold, io / (io + iu)});
  }
  std::sort(out.totals.begin(), out.totals.end(),
            [](const TotalsProb& a, const TotalsProb& b) { return a.threshold < b.threshold; });
  return out;
}

double p_over(const ScoringRates& rates, double threshold) {
  if (!is_half_integer_threshold(threshold))
    throw std::invalid_argument("threshold " + std::to_string(threshold) + " is not a half-integer in [0.5, 5.5]");
  return poisson_over(rates.home() + rates.away(), threshold);
}

ImpliedProbs model_probs(const ScoringRates& rates, std::span<const double> thresholds) {
  ImpliedProbs out;
  out.outcome = outcome_probs_poisson(0, {rates.home(), rates.away()});
  for (double th : thresholds) out.totals.push_back({th, p_over(rates, th)});
  return out;
}

double calibration_objective(const ImpliedProbs& implied, double lambda_home, double lambda_away) {
  const ProbTriple model = outcome_probs_poisson(0, {lambda_home, lambda_away});
  auto sq = [](double x) { return x * x; };
  double f = sq(model.home - implied.outcome.home) + sq(model.draw - implied.outcome.draw) +
             sq(model.away - implied.outcome.away);
  for (const auto& t : implied.totals) f += sq(poisson_over(lambda_home + lambda_away, t.threshold) - t.p_over);
  return f;
}

ScoringRates initial_rates(const ImpliedProbs& implied, const CalibrationOptions& options) {
  double total = kDefaultTotal;
  const auto line = std::find_if(implied.totals.begin(), implied.totals.end(),
                                 [](const TotalsProb& t) { return t.threshold == 2.5; });
  if (line != implied.totals.end()) {
    double lo = 2.0 * options.lambda_min, hi = 2.0 * options.lambda_max;
    if (line->p_over <= poisson_over(lo, 2.5)) {
      total = lo;
    } else if (line->p_over >= poisson_over(hi, 2.5)) {
      total = hi;
    } else {
      for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (poisson_over(mid, 2.5) < line->p_over ? lo : hi) = mid;
      }
      total = 0.5 * (lo + hi);
    }
  }
  const double ph = implied.outcome.home, pa = implied.outcome.away;
  const double share = ph + pa > 0.0 ? ph / (ph + pa) : 0.5;
  auto clamp = [&](double v) { return std::clamp(v, options.lambda_min, options.lambda_max); };
  return {clamp(total * share), clamp(total * (1.0 - share))};
}

CalibrationResult calibrate(const ImpliedProbs& implied, const CalibrationOptions& options) {
  if (!implied.outcome.on_simplex()) throw std::invalid_argument("implied outcome probabilities not on the simplex");
  if (!(options.lambda_min >= 0.0 && options.lambda_min < options.lambda_max && options.lambda_max <= 8.0))
    throw std::invalid_argument("calibration box must satisfy 0 <= lambda_min < lambda_max <= 8");
  if (options.max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  using Point = std::array<double, 2>;
  auto box = [&](Point p) {
    for (auto& v : p) v = std::clamp(v, options.lambda_min, options.lambda_max);
    return p;
  };
  auto f = [&](const Point& p) { return calibration_objective(implied, p[0], p[1]); };

  CalibrationResult result;
  result.initial = initial_rates(implied, options);
  const Point start{result.initial.home(), result.initial.away()};
  result.initial_objective = f(start);

  std::array<Point, 3> x{start, box({start[0] + std::max(0.1, 0.1 * start[0]), start[1]}),
                         box({start[0], start[1] + std::max(0.1, 0.1 * start[1])})};
  // A start on the upper bound cannot step up; step down instead.
  for (int i = 0; i < 2; ++i)
    if (x[i + 1] == start) x[i + 1][i] = std::max(options.lambda_min, start[i] - 0.1);
  std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    const double diameter =
        std::max({std::hypot(x[worst][0] - x[best][0], x[worst][1] - x[best][1]),
                  std::hypot(x[mid][0] - x[best][0], x[mid][1] - x[best][1])});
    if (fx[worst] - fx[best] < options.objective_tol && diameter < options.step_tol) {
      result.converged = true;
      break;
    }
    const Point centroid{0.5 * (x[best][0] + x[mid][0]), 0.5 * (x[best][1] + x[mid][1])};
    auto along = [&](double coef) {
      return box({centroid[0] + coef * (x[worst][0] - centroid[0]), centroid[1] + coef * (x[worst][1] - centroid[1])});
    };
    const Point reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < fx[best]) {
      const Point expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        x[worst] = expanded, fx[worst] = fe;
      } else {
        x[worst] = reflected, fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[mid]) {
      x[worst] = reflected, fx[worst] = fr;
      continue;
    }
    const bool outside = fr < fx[worst];
    const Point contracted = along(outside ? -0.5 : 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : fx[worst])) {
      x[worst] = contracted, fx[worst] = fc;
      continue;
    }
    for (int i : {mid, worst}) {
      x[i] = box({x[best][0] + 0.5 * (x[i][0] - x[best][0]), x[best][1] + 0.5 * (x[i][1] - x[best][1])});
      fx[i] = f(x[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
  result.rates = ScoringRates(x[best][0], x[best][1]);
  result.objective = fx[best];
  result.iterations = it;

  std::ostringstream diag;
  if (!result.converged) diag << "no convergence after " << it << " iterations; ";
  if (result.objective > options.flag_objective)
    diag << "objective " << result.objective << " above " << options.flag_objective
         << " (odds markets inconsistent with a Poisson match); ";
  result.diagnostic = diag.str();
  result.flagged = !result.diagnostic.empty();
  return result;
}

}  // namespace sk
