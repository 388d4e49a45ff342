#include "suspensekit/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sk {

ScoringRates::ScoringRates(double home, double away) : home_(home), away_(away) {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0 || v > kMaxRate)
      throw std::invalid_argument(std::string("scoring rate ") + name + " = " + std::to_string(v) +
                                  " outside [0, 8]");
  };
  check(home, "home");
  check(away, "away");
}

MinuteWeights::MinuteWeights(std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(kMinutes))
    throw std::invalid_argument("minute weights need exactly 90 entries, got " +
                                std::to_string(weights.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0)
      throw std::invalid_argument("minute weight " + std::to_string(i + 1) + " is negative or not finite");
    w_[i] = weights[i];
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("minute weights sum to " + std::to_string(total) + ", expected 1");
}

MinuteWeights MinuteWeights::uniform() {
  std::array<double, kMinutes> w;
  w.fill(1.0 / kMinutes);
  return MinuteWeights(w);
}

double MinuteWeights::at(int minute) const {
  if (minute < 1 || minute > kMinutes) throw std::out_of_range("minute " + std::to_string(minute));
  return w_[minute - 1];
}

MatchTimeline::MatchTimeline(std::vector<MatchEvent> events) : events_(std::move(events)) {
  for (const auto& e : events_) {
    if (e.minute < 1 || e.minute > kMinutes)
      throw std::invalid_argument("event minute " + std::to_string(e.minute) + " outside [1, 90]");
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const MatchEvent& a, const MatchEvent& b) { return a.minute < b.minute; });
}

MatchTimeline MatchTimeline::mirrored() const {
  std::vector<MatchEvent> out = events_;
  for (auto& e : out) e.team = other(e.team);
  return MatchTimeline(std::move(out));
}

int MatchTimeline::goals(Side s) const noexcept {
  return static_cast<int>(std::count_if(events_.begin(), events_.end(), [s](const MatchEvent& e) {
    return e.kind == EventKind::goal && e.team == s;
  }));
}

bool ProbTriple::on_simplex(double tol) const noexcept {
  auto in_unit = [tol](double p) { return p >= -tol && p <= 1.0 + tol; };
  return in_unit(home) && in_unit(draw) && in_unit(away) && std::abs(sum() - 1.0) <= tol;
}

double distance(const ProbTriple& a, const ProbTriple& b) noexcept {
  const double dh = a.home - b.home;
  const double dd = a.draw - b.draw;
  const double da = a.away - b.away;
  return std::sqrt(dh * dh + dd * dd + da * da);
}

int fold_injury_time(int raw_minute, int raw_added) {
  if (raw_minute < 1 || raw_minute > kMinutes)
    throw std::invalid_argument("minute " + std::to_string(raw_minute) + " outside [1, 90]");
  if (raw_added < 0) throw std::invalid_argument("negative added time");
  if (raw_added > 0 && raw_minute != 45 && raw_minute != kMinutes)
    throw std::invalid_argument("added time attached to minute " + std::to_string(raw_minute));
  return raw_minute;
}

MatchState replay_state(const MatchTimeline& timeline, int minute) {
  if (minute < 0 || minute > kMinutes) throw std::invalid_argument("replay minute must be in 0..90");
  MatchState s;
  s.minute = minute;
  for (const auto& e : timeline.events()) {
    if (e.minute > minute) break;
    const bool home = e.team == Side::home;
    if (e.kind == EventKind::goal)
      ++(home ? s.score_home : s.score_away);
    else
      ++(home ? s.red_cards_home : s.red_cards_away);
  }
  return s;
}

std::array<MatchState, kMinutes + 1> replay_all(const MatchTimeline& timeline) {
  std::array<MatchState, kMinutes + 1> states;
  MatchState s;
  auto it = timeline.events().begin();
  const auto end = timeline.events().end();
  for (int t = 0; t <= kMinutes; ++t) {
    s.minute = t;
    for (; it != end && it->minute <= t; ++it) {
      const bool home = it->team == Side::home;
      if (it->kind == EventKind::goal)
        ++(home ? s.score_home : s.score_away);
      else
        ++(home ? s.red_cards_home : s.red_cards_away);
    }
    states[t] = s;
  }
  return states;
}

}  // namespace sk
