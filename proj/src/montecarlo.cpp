#include "suspensekit/montecarlo.hpp"

#include <array>
#include <string>

#include "suspensekit/parallel.hpp"

namespace sk {

namespace {

constexpr std::uint64_t draw_counter(int minute, Side side) {
  return 2 * static_cast<std::uint64_t>(minute) + (side == Side::home ? 0 : 1);
}

constexpr int kBlock = 4096;

}  // namespace

void McConfig::validate() const {
  if (replications < 1)
    throw std::invalid_argument("replications must be >= 1, got " + std::to_string(replications));
}

MatchTimeline simulate_match(const RateSchedule& schedule, const RngStream& stream) {
  std::vector<MatchEvent> events;
  for (int t = 1; t <= kMinutes; ++t) {
    for (Side side : {Side::home, Side::away}) {
      const double q = schedule.at(side, t);
      if (q > 0.0 && stream.uniform(draw_counter(t, side)) < q)
        events.push_back({t, side, EventKind::goal});
    }
  }
  return MatchTimeline(std::move(events));
}

MatchTimeline simulate_match(const ScoringRates& rates, const MinuteWeights& weights,
                             const RngStream& stream) {
  return simulate_match(RateSchedule::build(rates, weights), stream);
}

ProbTriple mc_outcome_probs(const MatchState& state, const RateSchedule& schedule, const McConfig& config,
                            const RngStream& stream) {
  config.validate();
  const double mh = red_card_multiplier(Side::home, state.red_cards_home, state.red_cards_away);
  const double ma = red_card_multiplier(Side::away, state.red_cards_home, state.red_cards_away);

  // Only minutes where a goal is possible need draws.
  struct Minute {
    std::uint64_t home_counter, away_counter;
    double home, away;
  };
  std::vector<Minute> live;
  for (int s = state.minute + 1; s <= kMinutes; ++s) {
    const double qh = schedule.base(Side::home, s) * mh;
    const double qa = schedule.base(Side::away, s) * ma;
    if (qh > 1.0 || qa > 1.0)
      throw std::invalid_argument("scoring probability exceeds 1 at minute " + std::to_string(s));
    if (qh > 0.0 || qa > 0.0)
      live.push_back({draw_counter(s, Side::home), draw_counter(s, Side::away), qh, qa});
  }
  const int diff0 = state.goal_diff();
  if (live.empty()) {
    if (diff0 > 0) return {1.0, 0.0, 0.0};
    if (diff0 < 0) return {0.0, 0.0, 1.0};
    return {0.0, 1.0, 0.0};
  }

  const int reps = config.replications;
  const std::size_t blocks = (static_cast<std::size_t>(reps) + kBlock - 1) / kBlock;
  std::vector<std::array<long, 3>> counts(blocks, {0, 0, 0});
  parallel_for(blocks, config.threads, [&](std::size_t b) {
    const int lo = static_cast<int>(b) * kBlock;
    const int hi = std::min(reps, lo + kBlock);
    auto& c = counts[b];
    for (int r = lo; r < hi; ++r) {
      const RngStream rep = stream.substream(static_cast<std::uint64_t>(r));
      int diff = diff0;
      for (const auto& m : live) {
        if (m.home > 0.0 && rep.uniform(m.home_counter) < m.home) ++diff;
        if (m.away > 0.0 && rep.uniform(m.away_counter) < m.away) --diff;
      }
      ++c[diff > 0 ? 0 : (diff == 0 ? 1 : 2)];
    }
  });
  std::array<long, 3> total{0, 0, 0};
  for (const auto& c : counts)
    for (int i = 0; i < 3; ++i) total[i] += c[i];
  const double n = reps;
  ProbTriple p{total[0] / n, total[1] / n, total[2] / n};
  p.away = 1.0 - p.home - p.draw;  // sum exactly 1 up to rounding of the first two
  if (p.away < 0.0) p.away = 0.0;
  return p;
}

ProbPath mc_prob_path(const MatchTimeline& timeline, const ScoringRates& rates, const MinuteWeights& weights,
                      const McConfig& config, std::uint64_t match_index) {
  config.validate();
  const auto schedule = RateSchedule::build(rates, weights, timeline);
  const auto stream = config.seed_policy.match_stream(match_index);
  const auto states = replay_all(timeline);
  ProbPath path;
  for (int t = 0; t <= kMinutes; ++t) path[t] = mc_outcome_probs(states[t], schedule, config, stream);
  return path;
}

}  // namespace sk
