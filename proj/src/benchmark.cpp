#include "suspensekit/benchmark.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "suspensekit/analytic.hpp"
#include "suspensekit/montecarlo.hpp"
#include "suspensekit/parallel.hpp"

namespace sk {

void GridSpec::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (lambda_min > lambda_max) throw std::invalid_argument("lambda_min exceeds lambda_max");
  if (lambda_min < 0.0 || lambda_max > kMaxRate) throw std::invalid_argument("grid rates outside [0, 8]");
  if (matches_per_pair < 1) throw std::invalid_argument("matches_per_pair must be >= 1");
}

std::vector<double> GridSpec::levels() const {
  validate();
  const long count = std::lround(std::floor((lambda_max - lambda_min) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (long i = 0; i < count; ++i) out.push_back(std::round((lambda_min + i * step) * 1e9) / 1e9);
  return out;
}

RngStream pair_stream(const RngSeedPolicy& policy, double lambda_home, double lambda_away) {
  const auto h = static_cast<std::uint64_t>(std::llround(lambda_home * 1e4));
  const auto a = static_cast<std::uint64_t>(std::llround(lambda_away * 1e4));
  return policy.match_stream((h << 32) | a);
}

PairSample simulate_pair(double lambda_home, double lambda_away, int matches, const MinuteWeights& weights,
                         const RngSeedPolicy& policy, BeliefTiming timing) {
  if (matches < 1) throw std::invalid_argument("need at least one match per pair");
  const ScoringRates rates(lambda_home, lambda_away);
  const auto schedule = RateSchedule::build(rates, weights);
  const OutcomeTable table(schedule, 0, 0);
  const auto stream = pair_stream(policy, lambda_home, lambda_away);
  PairSample out;
  out.suspense.reserve(matches);
  out.surprise.reserve(matches);
  for (int m = 0; m < matches; ++m) {
    const auto timeline = simulate_match(schedule, stream.substream(static_cast<std::uint64_t>(m)));
    const auto e = excitement_from_table(timeline, table, timing);
    out.suspense.push_back(e.suspense);
    out.surprise.push_back(e.surprise);
  }
  return out;
}

namespace {

PairSummary summarize_pair(double lh, double la, const PairSample& sample) {
  return {lh, la, summarize(sample.suspense), summarize(sample.surprise)};
}

}  // namespace

std::vector<PairSummary> simulate_grid(const GridSpec& spec, const MinuteWeights& weights,
                                       const RngSeedPolicy& policy, const SimulationOptions& options) {
  const auto levels = spec.levels();
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = spec.unordered ? i : 0; j < levels.size(); ++j) pairs.emplace_back(levels[i], levels[j]);

  std::vector<PairSummary> rows(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t k) {
    const auto [lh, la] = pairs[k];
    rows[k] = summarize_pair(lh, la, simulate_pair(lh, la, spec.matches_per_pair, weights, policy, options.timing));
  });
  return rows;
}

BenchmarkRange benchmark_range(const MinuteWeights& weights, const RngSeedPolicy& policy, double lambda_low,
                               double lambda_high, int matches, BeliefTiming timing) {
  if (lambda_low > lambda_high) throw std::invalid_argument("lambda_low exceeds lambda_high");
  BenchmarkRange r;
  r.lambda_low = lambda_low;
  r.lambda_high = lambda_high;
  r.low_row = summarize_pair(lambda_low, lambda_low,
                             simulate_pair(lambda_low, lambda_low, matches, weights, policy, timing));
  r.high_row = summarize_pair(lambda_high, lambda_high,
                              simulate_pair(lambda_high, lambda_high, matches, weights, policy, timing));
  r.suspense_low = r.high_row.suspense.mean;
  r.suspense_high = r.low_row.suspense.mean;
  r.surprise_low = r.low_row.surprise.mean;
  r.surprise_high = r.high_row.surprise.mean;
  return r;
}

std::vector<HeatmapCell> surface_export(const std::vector<PairSummary>& grid) {
  std::map<std::pair<double, double>, HeatmapCell> cells;
  for (const auto& row : grid) {
    cells[{row.lambda_home, row.lambda_away}] = {row.lambda_home, row.lambda_away, row.suspense.mean,
                                                 row.surprise.mean};
  }
  // Fill missing mirror images; simulated cells always win.
  for (const auto& row : grid) {
    const std::pair<double, double> mirror{row.lambda_away, row.lambda_home};
    if (!cells.contains(mirror))
      cells[mirror] = {row.lambda_away, row.lambda_home, row.suspense.mean, row.surprise.mean};
  }
  std::vector<HeatmapCell> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) out.push_back(cell);
  return out;
}

}  // namespace sk
