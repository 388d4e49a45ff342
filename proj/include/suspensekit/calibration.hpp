// Scoring rates from pre-match betting odds.
//
// Bookmaker margins are removed by multiplicative normalisation within each
// market (1X2 and every over/under pair). The rates are then chosen to
// minimise the unweighted sum of squared differences between the
// independent-Poisson model and the implied probabilities, over the three
// match outcomes and every available "over k.5 goals" line.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "suspensekit/domain.hpp"

namespace sk {

inline constexpr double kMinThreshold = 0.5;
inline constexpr double kMaxThreshold = 5.5;
inline const std::vector<double> kStandardThresholds{0.5, 1.5, 2.5, 3.5, 4.5, 5.5};

struct OverUnderLine {
  double threshold = 2.5;  // half-integer in [0.5, 5.5]
  double over_odds = 0.0;
  double under_odds = 0.0;
};

struct OddsRecord {
  std::string match_id;
  double home_odds = 0.0;
  double draw_odds = 0.0;
  double away_odds = 0.0;
  std::vector<OverUnderLine> ou_lines;

  /// Throws unless every odd is > 1 and thresholds are distinct half-integers.
  void validate() const;
};

bool is_half_integer_threshold(double threshold) noexcept;

struct TotalsProb {
  double threshold = 2.5;
  double p_over = 0.5;
};

struct ImpliedProbs {
  ProbTriple outcome;
  std::vector<TotalsProb> totals;

  ImpliedProbs mirrored() const { return {outcome.mirrored(), totals}; }
};

ImpliedProbs deoverround(const OddsRecord& record);

/// P(total goals > threshold) for independent Poisson scores.
double p_over(const ScoringRates& rates, double threshold);

/// Model outcome triple and over probabilities at `thresholds`.
ImpliedProbs model_probs(const ScoringRates& rates, std::span<const double> thresholds = kStandardThresholds);

/// Sum of squared model-minus-implied differences at (lambda_home, lambda_away).
double calibration_objective(const ImpliedProbs& implied, double lambda_home, double lambda_away);

struct CalibrationOptions {
  double lambda_min = 0.01;
  double lambda_max = 8.0;
  double objective_tol = 1e-10;  // spread of the simplex objective values
  double step_tol = 1e-6;        // simplex diameter
  int max_iterations = 200;
  double flag_objective = 1e-4;  // fits worse than this are flagged as inconsistent markets
};

struct CalibrationResult {
  ScoringRates rates{0.0, 0.0};
  double objective = 0.0;
  double initial_objective = 0.0;
  ScoringRates initial{0.0, 0.0};
  int iterations = 0;
  bool converged = false;
  bool flagged = false;
  std::string diagnostic;  // empty unless flagged
};

/// Starting point: total goals from the 2.5 line (2.6 when absent), split in
/// proportion to the home and away win probabilities.
ScoringRates initial_rates(const ImpliedProbs& implied, const CalibrationOptions& options = {});

/// Nelder-Mead descent inside the box [lambda_min, lambda_max]^2.
CalibrationResult calibrate(const ImpliedProbs& implied, const CalibrationOptions& options = {});

}  // namespace sk
