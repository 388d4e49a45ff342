// Monte Carlo rollouts of the per-minute Bernoulli goal model.
//
// Replication r of a rollout draws minute s, team j from
// stream.substream(r).uniform(2 * s + j). The same draw is reused whichever
// minute the rollout starts from, so consecutive path entries share random
// numbers and their differences carry little simulation noise.
#pragma once

#include "suspensekit/analytic.hpp"
#include "suspensekit/domain.hpp"
#include "suspensekit/rng.hpp"

namespace sk {

inline constexpr int kDefaultReplications = 100'000;
inline constexpr int kFastReplications = 10'000;

struct McConfig {
  int replications = kDefaultReplications;
  RngSeedPolicy seed_policy{};
  unsigned threads = 1;  // 0 = all hardware threads; never changes results

  void validate() const;
};

/// Draws one goal timeline (no red cards) from the scheduled probabilities.
MatchTimeline simulate_match(const RateSchedule& schedule, const RngStream& stream);
MatchTimeline simulate_match(const ScoringRates& rates, const MinuteWeights& weights,
                             const RngStream& stream);

/// Outcome frequencies over `replications` rollouts of minutes
/// state.minute+1..90, with the state's red-card multipliers in force.
ProbTriple mc_outcome_probs(const MatchState& state, const RateSchedule& schedule,
                            const McConfig& config, const RngStream& stream);

/// mc_outcome_probs from the replayed state of every minute 0..90. The
/// stream is config.seed_policy.match_stream(match_index).
ProbPath mc_prob_path(const MatchTimeline& timeline, const ScoringRates& rates,
                      const MinuteWeights& weights, const McConfig& config,
                      std::uint64_t match_index = 0);

}  // namespace sk
