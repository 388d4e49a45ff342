#include "suspensekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sk {

namespace {

void expect_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(got) + " entries, expected " +
                                std::to_string(want));
}

double squared_shift(const ProbTriple& to, const ProbTriple& from) {
  const double dh = to.home - from.home;
  const double dd = to.draw - from.draw;
  const double da = to.away - from.away;
  return dh * dh + dd * dd + da * da;
}

void total_up(MetricSeries& m) {
  m.total = 0.0;
  for (double v : m.per_minute) m.total += v;
}

// Per-minute inputs of both metrics. Belief of minute t is the state after
// minute t - lag. The hypothetical triples add one goal to that state and
// advance one minute; the weights are the scheduled chances of minute t+1
// under that state's red cards. Minute 90 has no successor.
struct MetricInputs {
  ProbPath beliefs;
  std::array<ScoreProbPair, kMinutes> scoring;
  std::array<HypotheticalTriples, kMinutes> hypothetical;
};

template <class TableFor>
MetricInputs metric_inputs(const std::array<MatchState, kMinutes + 1>& states, const ProbPath& path,
                           BeliefTiming timing, TableFor&& table_for) {
  const int lag = timing == BeliefTiming::start_of_minute ? 1 : 0;
  MetricInputs in;
  for (int t = 0; t <= kMinutes; ++t) in.beliefs[t] = path[std::max(t - lag, 0)];
  for (int t = 1; t <= kMinutes; ++t) {
    if (t == kMinutes) {
      in.scoring[t - 1] = {0.0, 0.0};
      in.hypothetical[t - 1] = {in.beliefs[t], in.beliefs[t]};
      continue;
    }
    const auto& s = states[t - lag];
    const OutcomeTable& table = table_for(s);
    in.scoring[t - 1] = {table.scoring(Side::home, t + 1), table.scoring(Side::away, t + 1)};
    const int next = t + 1 - lag;
    in.hypothetical[t - 1] = {table.at(next, s.goal_diff() + 1), table.at(next, s.goal_diff() - 1)};
  }
  return in;
}

template <class TableFor>
ProbPath analytic_path(const std::array<MatchState, kMinutes + 1>& states, TableFor&& table_for) {
  ProbPath path;
  for (int t = 0; t <= kMinutes; ++t) path[t] = table_for(states[t]).at(t, states[t].goal_diff());
  return path;
}

void score_metrics(const MetricInputs& in, const ProbPath& path, MatchExcitement& out) {
  const auto sur = surprise(in.beliefs);
  const auto sus = suspense(in.beliefs, in.scoring, in.hypothetical);
  out.prob_path = path;
  out.surprise = sur.total;
  out.per_minute_surprise = sur.per_minute;
  out.suspense = sus.total;
  out.per_minute_suspense = sus.per_minute;
}

}  // namespace

MetricSeries surprise(std::span<const ProbTriple> path) {
  expect_size(path.size(), kMinutes + 1, "probability path");
  MetricSeries m;
  for (int t = 1; t <= kMinutes; ++t) m.per_minute[t - 1] = distance(path[t], path[t - 1]);
  total_up(m);
  return m;
}

MetricSeries suspense(std::span<const ProbTriple> path, std::span<const ScoreProbPair> scoring,
                      std::span<const HypotheticalTriples> hypothetical) {
  expect_size(path.size(), kMinutes + 1, "probability path");
  expect_size(scoring.size(), kMinutes, "scoring probabilities");
  expect_size(hypothetical.size(), kMinutes, "hypothetical triples");
  MetricSeries m;
  for (int t = 1; t <= kMinutes; ++t) {
    const auto& now = path[t];
    const auto& q = scoring[t - 1];
    const auto& h = hypothetical[t - 1];
    const double v =
        q.home_scores * squared_shift(h.if_home_scores, now) + q.away_scores * squared_shift(h.if_away_scores, now);
    m.per_minute[t - 1] = std::sqrt(v);
  }
  total_up(m);
  return m;
}

MatchExcitement excitement(const MatchTimeline& timeline, const ScoringRates& rates, const MinuteWeights& weights,
                           const ExcitementOptions& options) {
  const auto schedule = RateSchedule::build(rates, weights, timeline);
  OutcomeTableCache cache(schedule, options.model);
  auto table_for = [&](const MatchState& s) -> const OutcomeTable& {
    return cache.get(s.red_cards_home, s.red_cards_away);
  };
  const auto states = replay_all(timeline);
  const ProbPath path = options.engine == Engine::monte_carlo
                            ? mc_prob_path(timeline, rates, weights, options.mc, options.match_index)
                            : analytic_path(states, table_for);
  MatchExcitement out;
  score_metrics(metric_inputs(states, path, options.timing, table_for), path, out);
  return out;
}

MatchExcitement excitement_from_table(const MatchTimeline& timeline, const OutcomeTable& table,
                                      BeliefTiming timing) {
  for (const auto& e : timeline.events())
    if (e.kind == EventKind::red_card)
      throw std::invalid_argument("excitement_from_table needs a timeline without red cards");
  auto table_for = [&](const MatchState&) -> const OutcomeTable& { return table; };
  const auto states = replay_all(timeline);
  const auto path = analytic_path(states, table_for);
  MatchExcitement out;
  score_metrics(metric_inputs(states, path, timing, table_for), path, out);
  return out;
}

}  // namespace sk
