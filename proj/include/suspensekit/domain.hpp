// Core match types shared by every engine: scoring rates, minute weights,
// event timelines, replayed match states and outcome-probability triples.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sk {

inline constexpr int kMinutes = 90;
inline constexpr double kMaxRate = 8.0;
inline constexpr double kSimplexTol = 1e-9;

enum class Side : std::uint8_t { home, away };
enum class EventKind : std::uint8_t { goal, red_card };

constexpr Side other(Side s) noexcept { return s == Side::home ? Side::away : Side::home; }

/// Expected goals per match for each team. Both rates lie in [0, kMaxRate].
class ScoringRates {
 public:
  ScoringRates(double home, double away);

  double home() const noexcept { return home_; }
  double away() const noexcept { return away_; }
  double of(Side s) const noexcept { return s == Side::home ? home_ : away_; }
  ScoringRates mirrored() const { return {away_, home_}; }

  friend bool operator==(const ScoringRates&, const ScoringRates&) = default;

 private:
  double home_;
  double away_;
};

/// Distribution of goal timing over minutes 1..90. Non-negative, sums to one.
class MinuteWeights {
 public:
  explicit MinuteWeights(std::span<const double> weights);

  static MinuteWeights uniform();

  /// Weight of `minute` in 1..90.
  double at(int minute) const;
  std::span<const double> values() const noexcept { return w_; }

  friend bool operator==(const MinuteWeights&, const MinuteWeights&) = default;

 private:
  std::array<double, kMinutes> w_{};
};

struct MatchEvent {
  int minute;  // 1..90 after injury-time folding
  Side team;
  EventKind kind;

  friend bool operator==(const MatchEvent&, const MatchEvent&) = default;
};

/// Goals and red cards ordered by minute. Construction stable-sorts by
/// minute, so same-minute events keep their input order.
class MatchTimeline {
 public:
  MatchTimeline() = default;
  explicit MatchTimeline(std::vector<MatchEvent> events);

  const std::vector<MatchEvent>& events() const noexcept { return events_; }
  bool empty() const noexcept { return events_.empty(); }

  /// Same events with home and away swapped.
  MatchTimeline mirrored() const;

  int goals(Side s) const noexcept;

  friend bool operator==(const MatchTimeline&, const MatchTimeline&) = default;

 private:
  std::vector<MatchEvent> events_;
};

struct MatchState {
  int minute = 0;  // 0 is pre-kickoff
  int score_home = 0;
  int score_away = 0;
  int red_cards_home = 0;
  int red_cards_away = 0;

  int goal_diff() const noexcept { return score_home - score_away; }

  friend bool operator==(const MatchState&, const MatchState&) = default;
};

struct ProbTriple {
  double home = 0.0;
  double draw = 1.0;
  double away = 0.0;

  double sum() const noexcept { return home + draw + away; }
  bool on_simplex(double tol = kSimplexTol) const noexcept;
  ProbTriple mirrored() const noexcept { return {away, draw, home}; }

  friend bool operator==(const ProbTriple&, const ProbTriple&) = default;
};

double distance(const ProbTriple& a, const ProbTriple& b) noexcept;

/// Probabilities that each team scores in the coming minute. Independent
/// events; they do not sum to one.
struct ScoreProbPair {
  double home_scores = 0.0;
  double away_scores = 0.0;
};

using ProbPath = std::array<ProbTriple, kMinutes + 1>;
using MinuteSeries = std::array<double, kMinutes>;

struct MatchExcitement {
  double suspense = 0.0;
  double surprise = 0.0;
  ProbPath prob_path{};
  MinuteSeries per_minute_suspense{};
  MinuteSeries per_minute_surprise{};
};

/// Maps stoppage-time events onto minute 45 or 90. `raw_added` may only be
/// non-zero for minutes 45 and 90.
int fold_injury_time(int raw_minute, int raw_added);

/// Goals and red cards among events with event.minute <= minute.
MatchState replay_state(const MatchTimeline& timeline, int minute);

/// replay_state for every minute 0..90 in one pass.
std::array<MatchState, kMinutes + 1> replay_all(const MatchTimeline& timeline);

}  // namespace sk
