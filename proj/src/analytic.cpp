#include "suspensekit/analytic.hpp"

#include <cmath>
#include <string>

namespace sk {

namespace {

constexpr double kPmfTrim = 1e-18;

void trim_tail(GoalPmf& pmf) {
  while (pmf.size() > 1 && pmf.back() < kPmfTrim) pmf.pop_back();
}

// pmf of (goals so far) + Bernoulli(q).
void add_bernoulli(GoalPmf& pmf, double q) {
  if (q <= 0.0) return;
  pmf.push_back(0.0);
  for (std::size_t k = pmf.size() - 1; k > 0; --k) pmf[k] = pmf[k] * (1.0 - q) + pmf[k - 1] * q;
  pmf[0] *= 1.0 - q;
  trim_tail(pmf);
}

void check_probability(double p, Side side, int minute) {
  if (p > 1.0)
    throw std::invalid_argument(std::string(side == Side::home ? "home" : "away") +
                                " scoring probability " + std::to_string(p) + " exceeds 1 at minute " +
                                std::to_string(minute));
}

ProbTriple normalized(double home, double draw, double away) {
  const double total = home + draw + away;
  return {home / total, draw / total, away / total};
}

}  // namespace

double red_card_multiplier(Side side, int red_cards_home, int red_cards_away) {
  const int own = side == Side::home ? red_cards_home : red_cards_away;
  const int opp = side == Side::home ? red_cards_away : red_cards_home;
  return std::pow(kRedCardOwnFactor, own) * std::pow(kRedCardOpponentFactor, opp);
}

RateSchedule RateSchedule::build(const ScoringRates& rates, const MinuteWeights& weights,
                                 const MatchTimeline& timeline) {
  RateSchedule s;
  const auto states = replay_all(timeline);
  for (int t = 1; t <= kMinutes; ++t) {
    const auto& prev = states[t - 1];  // cards shown up to t-1 are in force at t
    s.base_home_[t - 1] = rates.home() * weights.at(t);
    s.base_away_[t - 1] = rates.away() * weights.at(t);
    s.home_[t - 1] = s.base_home_[t - 1] *
                     red_card_multiplier(Side::home, prev.red_cards_home, prev.red_cards_away);
    s.away_[t - 1] = s.base_away_[t - 1] *
                     red_card_multiplier(Side::away, prev.red_cards_home, prev.red_cards_away);
    check_probability(s.home_[t - 1], Side::home, t);
    check_probability(s.away_[t - 1], Side::away, t);
  }
  return s;
}

double RateSchedule::at(Side side, int minute) const {
  if (minute < 1 || minute > kMinutes) throw std::out_of_range("minute " + std::to_string(minute));
  return per_minute(side)[minute - 1];
}

double RateSchedule::base(Side side, int minute) const {
  if (minute < 1 || minute > kMinutes) throw std::out_of_range("minute " + std::to_string(minute));
  return (side == Side::home ? base_home_ : base_away_)[minute - 1];
}

RemainingMeans remaining_means(const RateSchedule& schedule, int minute) {
  RemainingMeans m;
  for (int s = minute + 1; s <= kMinutes; ++s) {
    m.home += schedule.at(Side::home, s);
    m.away += schedule.at(Side::away, s);
  }
  return m;
}

RemainingMeans remaining_means(const RateSchedule& schedule, const MatchState& state) {
  RemainingMeans m;
  for (int s = state.minute + 1; s <= kMinutes; ++s) {
    m.home += schedule.base(Side::home, s);
    m.away += schedule.base(Side::away, s);
  }
  m.home *= red_card_multiplier(Side::home, state.red_cards_home, state.red_cards_away);
  m.away *= red_card_multiplier(Side::away, state.red_cards_home, state.red_cards_away);
  return m;
}

GoalPmf poisson_pmf(double mean, double tail_tol) {
  if (mean <= 0.0) return {1.0};
  GoalPmf pmf;
  double term = std::exp(-mean);
  double cumulative = 0.0;
  for (int k = 0;; ++k) {
    if (k > 0) term *= mean / k;
    pmf.push_back(term);
    cumulative += term;
    // Past the mode terms decrease geometrically, so the remaining tail is
    // bounded by term * ratio / (1 - ratio).
    const double ratio = mean / (k + 1);
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) < tail_tol) break;
  }
  for (auto& p : pmf) p /= cumulative;
  return pmf;
}

GoalPmf bernoulli_sum_pmf(std::span<const double> probs) {
  GoalPmf pmf{1.0};
  for (double q : probs) add_bernoulli(pmf, q);
  return pmf;
}

ProbTriple outcome_from_pmfs(int goal_diff, const GoalPmf& home, const GoalPmf& away) {
  // cdf[k] = P(away remaining <= k - 1)
  std::vector<double> cdf(away.size() + 1, 0.0);
  for (std::size_t k = 0; k < away.size(); ++k) cdf[k + 1] = cdf[k] + away[k];
  const double away_total = cdf.back();
  auto below = [&](long k) {  // P(away remaining < k)
    if (k <= 0) return 0.0;
    if (k >= static_cast<long>(away.size())) return away_total;
    return cdf[k];
  };
  double p_home = 0.0, p_draw = 0.0, p_away = 0.0;
  for (std::size_t x = 0; x < home.size(); ++x) {
    if (home[x] == 0.0) continue;
    const long level = static_cast<long>(x) + goal_diff;  // away goals needed to draw
    const double lt = below(level);
    const double eq = (level >= 0 && level < static_cast<long>(away.size())) ? away[level] : 0.0;
    p_home += home[x] * lt;
    p_draw += home[x] * eq;
    p_away += home[x] * (away_total - lt - eq);
  }
  if (p_away < 0.0) p_away = 0.0;
  return normalized(p_home, p_draw, p_away);
}

ProbTriple outcome_probs(const MatchState& state, const RateSchedule& schedule, RemainingModel model) {
  if (model == RemainingModel::poisson)
    return outcome_probs_poisson(state.goal_diff(), remaining_means(schedule, state));
  const double mh = red_card_multiplier(Side::home, state.red_cards_home, state.red_cards_away);
  const double ma = red_card_multiplier(Side::away, state.red_cards_home, state.red_cards_away);
  GoalPmf home{1.0}, away{1.0};
  for (int s = state.minute + 1; s <= kMinutes; ++s) {
    const double qh = schedule.base(Side::home, s) * mh;
    const double qa = schedule.base(Side::away, s) * ma;
    check_probability(qh, Side::home, s);
    check_probability(qa, Side::away, s);
    add_bernoulli(home, qh);
    add_bernoulli(away, qa);
  }
  return outcome_from_pmfs(state.goal_diff(), home, away);
}

ProbTriple outcome_probs_poisson(int goal_diff, const RemainingMeans& means) {
  return outcome_from_pmfs(goal_diff, poisson_pmf(means.home), poisson_pmf(means.away));
}

ScoreProbPair next_minute_scoring(const MatchState& state, const RateSchedule& schedule) {
  if (state.minute < 0 || state.minute >= kMinutes)
    throw std::invalid_argument("no minute after minute " + std::to_string(state.minute));
  return {schedule.at(Side::home, state.minute + 1), schedule.at(Side::away, state.minute + 1)};
}

OutcomeTable::OutcomeTable(const RateSchedule& schedule, int red_cards_home, int red_cards_away,
                           RemainingModel model) {
  const double mh = red_card_multiplier(Side::home, red_cards_home, red_cards_away);
  const double ma = red_card_multiplier(Side::away, red_cards_home, red_cards_away);
  for (int s = 1; s <= kMinutes; ++s) {
    home_[s - 1] = schedule.base(Side::home, s) * mh;
    away_[s - 1] = schedule.base(Side::away, s) * ma;
    check_probability(home_[s - 1], Side::home, s);
    check_probability(away_[s - 1], Side::away, s);
  }

  GoalPmf home{1.0}, away{1.0};
  double mean_home = 0.0, mean_away = 0.0;
  for (int t = kMinutes; t >= 0; --t) {
    if (t < kMinutes) {
      if (model == RemainingModel::bernoulli_chain) {
        add_bernoulli(home, home_[t]);
        add_bernoulli(away, away_[t]);
      } else {
        mean_home += home_[t];
        mean_away += away_[t];
        home = poisson_pmf(mean_home);
        away = poisson_pmf(mean_away);
      }
    }
    // Distribution of (home remaining - away remaining), index k + offset.
    const int offset = static_cast<int>(away.size()) - 1;
    std::vector<double> diff(home.size() + away.size() - 1, 0.0);
    for (std::size_t x = 0; x < home.size(); ++x)
      for (std::size_t y = 0; y < away.size(); ++y) diff[x + offset - y] += home[x] * away[y];

    // For current difference d the final difference is k + d. Stored d
    // ranges over [-(|home|-1), |away|-1]; outside it the result is certain.
    Slice& slice = slices_[t];
    const int d_lo = -(static_cast<int>(home.size()) - 1);
    const int d_hi = offset;
    slice.offset = -d_lo;
    slice.triples.assign(d_hi - d_lo + 1, ProbTriple{});
    // below[i] = sum diff[0..i-1]
    std::vector<double> below(diff.size() + 1, 0.0);
    for (std::size_t i = 0; i < diff.size(); ++i) below[i + 1] = below[i] + diff[i];
    const double total = below.back();
    for (int d = d_lo; d <= d_hi; ++d) {
      const int zero = -d + offset;  // index of final difference 0
      const double p_away = below[zero];
      const double p_draw = diff[zero];
      const double p_home = total - below[zero + 1];
      slice.triples[d - d_lo] = normalized(p_home < 0.0 ? 0.0 : p_home, p_draw, p_away);
    }
  }
}

ProbTriple OutcomeTable::at(int minute, int goal_diff) const {
  const Slice& slice = slices_.at(minute);
  const long idx = static_cast<long>(goal_diff) + slice.offset;
  if (idx < 0) return {0.0, 0.0, 1.0};
  if (idx >= static_cast<long>(slice.triples.size())) return {1.0, 0.0, 0.0};
  return slice.triples[idx];
}

double OutcomeTable::scoring(Side side, int minute) const {
  if (minute < 1 || minute > kMinutes) throw std::out_of_range("minute " + std::to_string(minute));
  return (side == Side::home ? home_ : away_)[minute - 1];
}

OutcomeTableCache::OutcomeTableCache(const RateSchedule& schedule, RemainingModel model)
    : schedule_(&schedule), model_(model) {}

const OutcomeTable& OutcomeTableCache::get(int red_cards_home, int red_cards_away) {
  const auto key = std::make_pair(red_cards_home, red_cards_away);
  auto it = tables_.find(key);
  if (it == tables_.end())
    it = tables_.emplace(key, OutcomeTable(*schedule_, red_cards_home, red_cards_away, model_)).first;
  return it->second;
}

ProbPath prob_path(const MatchTimeline& timeline, const ScoringRates& rates, const MinuteWeights& weights,
                   RemainingModel model) {
  const auto schedule = RateSchedule::build(rates, weights, timeline);
  OutcomeTableCache cache(schedule, model);
  const auto states = replay_all(timeline);
  ProbPath path;
  for (int t = 0; t <= kMinutes; ++t) {
    const auto& s = states[t];
    path[t] = cache.get(s.red_cards_home, s.red_cards_away).at(t, s.goal_diff());
  }
  return path;
}

}  // namespace sk
