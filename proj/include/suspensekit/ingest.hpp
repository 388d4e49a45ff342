// Reading and writing the on-disk CSV formats.
//
//   matches:    match_id,league,season,date,home,away,events
//               events = ';'-joined tokens minute[+added]:H|A:goal|red
//   odds:       match_id,odds_h,odds_d,odds_a,threshold,over,under
//               one row per threshold, 1X2 repeated; empty threshold,over,under
//               for a match with 1X2 odds only
//   weights:    league,minute,weight
//   excitement: tag line, then
//               match_id,league,season,date,home,away,lambda_home,lambda_away,
//               p_home,p_draw,p_away,suspense,surprise
//
// A header row is required. Lines starting with '#' are comments. Fields may
// be double-quoted. Numbers are written in shortest round-trip form.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "suspensekit/analysis.hpp"
#include "suspensekit/calibration.hpp"
#include "suspensekit/domain.hpp"

namespace sk {

inline constexpr const char* kExcitementTag = "# suspensekit-excitement v1";

/// Parse error carrying the source name and 1-based line number.
class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& source, long line, const std::string& what);
  long line() const noexcept { return line_; }

 private:
  long line_;
};

struct DatasetManifest {
  std::filesystem::path matches;
  std::filesystem::path odds;
  std::optional<std::filesystem::path> weights;
  std::vector<std::string> leagues;  // empty means all
  std::vector<int> seasons;          // empty means all
  std::filesystem::path output_dir;

  /// Throws if a referenced input file does not exist.
  void validate() const;
  bool accepts(const std::string& league, int season) const;
};

struct MatchRow {
  MatchRecord meta;  // excitement fields left at zero
  MatchTimeline timeline;
};

/// Splits one CSV line, honouring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);

/// "45+2:H:goal;63:A:red" with injury time folded.
MatchTimeline parse_events(const std::string& field);

std::vector<MatchRow> load_matches(std::istream& in, const std::string& source = "<matches>");
std::vector<MatchRow> load_matches(const std::filesystem::path& path);

/// Pooled goal-minute frequencies of both sides per league.
std::map<std::string, MinuteWeights> estimate_weights(const std::vector<MatchRow>& matches);
MinuteWeights estimate_weights(const std::vector<MatchTimeline>& timelines);

std::map<std::string, MinuteWeights> load_weights(std::istream& in, const std::string& source = "<weights>");
std::map<std::string, MinuteWeights> load_weights(const std::filesystem::path& path);
void write_weights(std::ostream& out, const std::map<std::string, MinuteWeights>& weights);

/// Odds in file order of first appearance.
std::vector<OddsRecord> load_odds(std::istream& in, const std::string& source = "<odds>");
std::vector<OddsRecord> load_odds(const std::filesystem::path& path);

struct OddsJoin {
  std::map<std::string, OddsRecord> by_match;
  std::vector<std::string> unmatched_odds;    // odds ids with no match row
  std::vector<std::string> matches_without_odds;
};

OddsJoin join_odds(const std::vector<MatchRow>& matches, const std::vector<OddsRecord>& odds);

/// Writes the tag and header unless `append` is set and the stream already
/// holds a file; `provenance` lines go out as '#' comments after the tag.
void persist_excitement(std::ostream& out, const std::vector<MatchRecord>& records,
                        const std::vector<std::string>& provenance = {});
void persist_excitement(const std::filesystem::path& path, const std::vector<MatchRecord>& records,
                        const std::vector<std::string>& provenance = {}, bool append = false);

/// Accepts concatenated files: repeated tag and header lines are skipped.
std::vector<MatchRecord> load_excitement(std::istream& in, const std::string& source = "<excitement>");
std::vector<MatchRecord> load_excitement(const std::filesystem::path& path);

/// Quotes a CSV field when it holds a comma, quote or newline.
std::string csv_escape(const std::string& field);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace sk
