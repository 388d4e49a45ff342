// Match-level surprise and suspense.
//
// Surprise sums the Euclidean distance between consecutive beliefs p_{t-1},
// p_t over minutes t = 1..90.
//
// Suspense sums, over minutes t = 1..90,
//   sqrt( sum_j  pHS_{t+1} * (p^j_{t+1} | home scores - p^j_t)^2
//              + pAS_{t+1} * (p^j_{t+1} | away scores - p^j_t)^2 )
// with j over home win, draw, away win.
//
// The weights pHS/pAS_{t+1} are the scheduled chances of minute t+1 and the
// term of minute 90, which has no successor, is zero.
//
// Which match state the belief p_t of minute t refers to is set by
// BeliefTiming. With start_of_minute (the default) p_t is the belief held
// while minute t is played, i.e. the state after minute t-1: p_1 equals the
// pre-match triple, p_{t+1} | goal is the state after minute t with one more
// goal, and the final minute's resolution falls outside the sum. With
// end_of_minute p_t already includes minute t's events and the path ends on
// the realised outcome.
#pragma once

#include <span>

#include "suspensekit/analytic.hpp"
#include "suspensekit/domain.hpp"
#include "suspensekit/montecarlo.hpp"

namespace sk {

struct MetricSeries {
  double total = 0.0;
  MinuteSeries per_minute{};
};

/// Outcome triples at minute t+1 if one more goal is scored by each team.
struct HypotheticalTriples {
  ProbTriple if_home_scores;
  ProbTriple if_away_scores;
};

/// path: beliefs p_0..p_90.
MetricSeries surprise(std::span<const ProbTriple> path);

/// scoring[t-1] and hypothetical[t-1] hold pHS/pAS_{t+1} and the triples
/// p_{t+1} | goal, for t = 1..90.
MetricSeries suspense(std::span<const ProbTriple> path, std::span<const ScoreProbPair> scoring,
                      std::span<const HypotheticalTriples> hypothetical);

enum class Engine { analytic, monte_carlo };

enum class BeliefTiming { start_of_minute, end_of_minute };

struct ExcitementOptions {
  Engine engine = Engine::analytic;
  RemainingModel model = RemainingModel::bernoulli_chain;
  BeliefTiming timing = BeliefTiming::start_of_minute;
  McConfig mc{};
  std::uint64_t match_index = 0;  // selects the Monte Carlo stream
};

/// Probability path, next-minute scoring probabilities, hypothetical
/// triples and both metrics for one match. Hypothetical triples always come
/// from the analytic engine. The stored prob_path holds the state after
/// each minute 0..90 regardless of timing.
MatchExcitement excitement(const MatchTimeline& timeline, const ScoringRates& rates,
                           const MinuteWeights& weights, const ExcitementOptions& options = {});

/// Analytic excitement for a card-free timeline using a prebuilt table.
/// Matches excitement() with the same schedule exactly.
MatchExcitement excitement_from_table(const MatchTimeline& timeline, const OutcomeTable& table,
                                      BeliefTiming timing = BeliefTiming::start_of_minute);

}  // namespace sk
