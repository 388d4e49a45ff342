// Exact in-play outcome probabilities for a match whose per-minute goals are
// independent Bernoulli draws.
//
// A red card multiplies the carded team's per-minute rate by 2/3 and the
// opponent's by 1.2, from the minute after the card through minute 90.
// Several cards compound multiplicatively.
//
// Probabilities at a state only use information available at that state:
// the remaining minutes are scored with the multipliers implied by the
// state's own red-card counts, never with cards shown later.
#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "suspensekit/domain.hpp"

namespace sk {

inline constexpr double kRedCardOwnFactor = 2.0 / 3.0;
inline constexpr double kRedCardOpponentFactor = 1.2;

/// Multiplier on `side`'s scoring rate given both teams' red-card counts.
double red_card_multiplier(Side side, int red_cards_home, int red_cards_away);

/// How the goal count over the remaining minutes is modelled.
enum class RemainingModel {
  bernoulli_chain,  // exact sum of the per-minute Bernoulli draws
  poisson,          // Poisson with the same mean
};

/// Per-minute goal probabilities for both teams over minutes 1..90.
class RateSchedule {
 public:
  /// Scheduled probabilities with the red cards of `timeline` applied.
  /// Throws if any entry would exceed 1.
  static RateSchedule build(const ScoringRates& rates, const MinuteWeights& weights,
                            const MatchTimeline& timeline = {});

  /// Probability for `side` in `minute` (1..90), multipliers in force.
  double at(Side side, int minute) const;
  /// Rate for `side` in `minute` before any red-card multiplier.
  double base(Side side, int minute) const;

  const std::array<double, kMinutes>& per_minute(Side side) const noexcept {
    return side == Side::home ? home_ : away_;
  }

 private:
  std::array<double, kMinutes> base_home_{}, base_away_{};
  std::array<double, kMinutes> home_{}, away_{};
};

struct RemainingMeans {
  double home = 0.0;
  double away = 0.0;
};

/// Sum of scheduled probabilities over minutes minute+1..90.
RemainingMeans remaining_means(const RateSchedule& schedule, int minute);

/// Remaining means as seen from `state`: base rates over minutes after
/// state.minute, scaled by the multipliers of the state's red cards.
RemainingMeans remaining_means(const RateSchedule& schedule, const MatchState& state);

/// Distribution of a team's remaining goal count. Index k holds P(k goals).
using GoalPmf = std::vector<double>;

GoalPmf poisson_pmf(double mean, double tail_tol = 1e-15);
GoalPmf bernoulli_sum_pmf(std::span<const double> probs);

/// Outcome probabilities for a current goal difference (home minus away)
/// given independent remaining-goal distributions.
ProbTriple outcome_from_pmfs(int goal_diff, const GoalPmf& home, const GoalPmf& away);

ProbTriple outcome_probs(const MatchState& state, const RateSchedule& schedule,
                         RemainingModel model = RemainingModel::bernoulli_chain);

/// Outcome probabilities when remaining goals are Poisson with the given means.
ProbTriple outcome_probs_poisson(int goal_diff, const RemainingMeans& means);

/// Scheduled goal probabilities for minute state.minute + 1.
ScoreProbPair next_minute_scoring(const MatchState& state, const RateSchedule& schedule);

/// Outcome triples for every minute and every goal difference, for one fixed
/// red-card configuration. Lookups are O(1); building costs one pmf
/// convolution per minute.
class OutcomeTable {
 public:
  OutcomeTable(const RateSchedule& schedule, int red_cards_home, int red_cards_away,
               RemainingModel model = RemainingModel::bernoulli_chain);

  /// Triple at `minute` (0..90) for goal difference `goal_diff`.
  ProbTriple at(int minute, int goal_diff) const;

  /// Per-minute scoring probabilities under this table's multipliers.
  double scoring(Side side, int minute) const;

 private:
  struct Slice {
    int offset = 0;  // index of goal difference 0
    std::vector<ProbTriple> triples;
  };
  std::array<Slice, kMinutes + 1> slices_;
  std::array<double, kMinutes> home_{}, away_{};
};

/// Lazily built OutcomeTables keyed by red-card counts.
class OutcomeTableCache {
 public:
  OutcomeTableCache(const RateSchedule& schedule, RemainingModel model);

  const OutcomeTable& get(int red_cards_home, int red_cards_away);

 private:
  const RateSchedule* schedule_;
  RemainingModel model_;
  std::map<std::pair<int, int>, OutcomeTable> tables_;
};

ProbPath prob_path(const MatchTimeline& timeline, const ScoringRates& rates,
                   const MinuteWeights& weights,
                   RemainingModel model = RemainingModel::bernoulli_chain);

}  // namespace sk
