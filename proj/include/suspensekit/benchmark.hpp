// Simulated matches over a grid of scoring rates and the benchmark range
// spanned by perfectly balanced matches.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "suspensekit/domain.hpp"
#include "suspensekit/metrics.hpp"
#include "suspensekit/rng.hpp"
#include "suspensekit/stats.hpp"

namespace sk {

struct GridSpec {
  double lambda_min = 0.0;
  double lambda_max = 5.0;
  double step = 0.1;
  int matches_per_pair = 10'000;
  bool unordered = true;  // only pairs with lambda_home <= lambda_away

  void validate() const;
  /// Rate values lambda_min, lambda_min + step, ..., lambda_max.
  std::vector<double> levels() const;
};

struct PairSummary {
  double lambda_home = 0.0;
  double lambda_away = 0.0;
  Summary suspense;
  Summary surprise;
};

struct SimulationOptions {
  BeliefTiming timing = BeliefTiming::start_of_minute;
  unsigned threads = 1;
};

/// Stream for match `match` of the pair: keyed by the rates themselves
/// (rounded to 1e-4), so a pair gets the same matches in any grid.
RngStream pair_stream(const RngSeedPolicy& policy, double lambda_home, double lambda_away);

/// Suspense and surprise of `matches` simulated matches (no red cards).
struct PairSample {
  std::vector<double> suspense;
  std::vector<double> surprise;
};
PairSample simulate_pair(double lambda_home, double lambda_away, int matches, const MinuteWeights& weights,
                         const RngSeedPolicy& policy, BeliefTiming timing = BeliefTiming::start_of_minute);

/// One summary row per pair; the default spec yields 1,326 rows.
std::vector<PairSummary> simulate_grid(const GridSpec& spec, const MinuteWeights& weights,
                                       const RngSeedPolicy& policy, const SimulationOptions& options = {});

struct BenchmarkRange {
  double suspense_low = 0.0;
  double suspense_high = 0.0;
  double surprise_low = 0.0;
  double surprise_high = 0.0;
  double lambda_low = 0.5;
  double lambda_high = 2.5;
  PairSummary low_row;   // balanced match at lambda_low
  PairSummary high_row;  // balanced match at lambda_high
};

/// Suspense is higher at the low rate and surprise at the high rate, so the
/// suspense bounds are (mean at lambda_high, mean at lambda_low) and the
/// surprise bounds the reverse.
BenchmarkRange benchmark_range(const MinuteWeights& weights, const RngSeedPolicy& policy,
                               double lambda_low = 0.5, double lambda_high = 2.5, int matches = 10'000,
                               BeliefTiming timing = BeliefTiming::start_of_minute);

struct HeatmapCell {
  double lambda_home;
  double lambda_away;
  double mean_suspense;
  double mean_surprise;
};

/// Full square of cells; for unordered grids (b, a) mirrors (a, b).
std::vector<HeatmapCell> surface_export(const std::vector<PairSummary>& grid);

}  // namespace sk
