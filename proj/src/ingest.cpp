#include "suspensekit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace sk {

namespace {

const std::vector<std::string> kMatchesHeader{"match_id", "league", "season", "date", "home", "away", "events"};
const std::vector<std::string> kOddsHeader{"match_id", "odds_h", "odds_d", "odds_a", "threshold", "over", "under"};
const std::vector<std::string> kWeightsHeader{"league", "minute", "weight"};
const std::vector<std::string> kExcitementHeader{"match_id", "league",  "season", "date",   "home",
                                                 "away",     "lambda_home", "lambda_away", "p_home",
                                                 "p_draw",   "p_away",  "suspense", "surprise"};

std::string join(const std::vector<std::string>& v, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool is_comment(const std::string& line) { return !line.empty() && line.front() == '#'; }

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

// Reads data rows after checking the header; calls fn(fields, line_number).
template <typename Fn>
void read_table(std::istream& in, const std::string& source, const std::vector<std::string>& header, Fn fn) {
  std::string line;
  long n = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (n == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (is_comment(line) || is_blank(line)) continue;
    auto fields = split_csv_line(line);
    if (!seen_header) {
      if (fields != header) throw IngestError(source, n, "expected header '" + join(header) + "'");
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw IngestError(source, n, "expected " + std::to_string(header.size()) + " fields, found " +
                                       std::to_string(fields.size()));
    }
    try {
      fn(fields, n);
    } catch (const IngestError&) {
      throw;
    } catch (const std::exception& e) {
      throw IngestError(source, n, e.what());
    }
  }
  if (!seen_header) throw IngestError(source, n, "missing header row");
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw std::invalid_argument(std::string("bad ") + what + " '" + s + "'");
  return v;
}

int parse_int(const std::string& s, const char* what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || p != end) throw std::invalid_argument(std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

IngestError::IngestError(const std::string& source, long line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

void DatasetManifest::validate() const {
  for (const auto* p : {&matches, &odds})
    if (!std::filesystem::exists(*p)) throw std::runtime_error("input file not found: " + p->string());
  if (weights && !std::filesystem::exists(*weights))
    throw std::runtime_error("input file not found: " + weights->string());
}

bool DatasetManifest::accepts(const std::string& league, int season) const {
  const bool league_ok = leagues.empty() || std::find(leagues.begin(), leagues.end(), league) != leagues.end();
  const bool season_ok = seasons.empty() || std::find(seasons.begin(), seasons.end(), season) != seasons.end();
  return league_ok && season_ok;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote");
  return out;
}

MatchTimeline parse_events(const std::string& field) {
  std::vector<MatchEvent> events;
  if (is_blank(field)) return MatchTimeline{};
  std::stringstream ss(field);
  std::string token;
  while (std::getline(ss, token, ';')) {
    token = trimmed(token);
    if (token.empty()) throw std::invalid_argument("empty event token in '" + field + "'");
    const auto c1 = token.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : token.find(':', c1 + 1);
    if (c2 == std::string::npos || token.find(':', c2 + 1) != std::string::npos)
      throw std::invalid_argument("event '" + token + "' is not minute:team:kind");
    const std::string minute = token.substr(0, c1), team = token.substr(c1 + 1, c2 - c1 - 1),
                      kind = token.substr(c2 + 1);
    const auto plus = minute.find('+');
    const int raw = parse_int(minute.substr(0, plus), "event minute");
    const int added = plus == std::string::npos ? 0 : parse_int(minute.substr(plus + 1), "added time");
    Side side;
    if (team == "H")
      side = Side::home;
    else if (team == "A")
      side = Side::away;
    else
      throw std::invalid_argument("unknown team '" + team + "' in event '" + token + "' (expected H or A)");
    EventKind k;
    if (kind == "goal")
      k = EventKind::goal;
    else if (kind == "red")
      k = EventKind::red_card;
    else
      throw std::invalid_argument("unknown event kind '" + kind + "' in event '" + token + "'");
    events.push_back({fold_injury_time(raw, added), side, k});
  }
  return MatchTimeline(std::move(events));
}

std::vector<MatchRow> load_matches(std::istream& in, const std::string& source) {
  std::vector<MatchRow> rows;
  std::set<std::string> ids;
  read_table(in, source, kMatchesHeader, [&](const std::vector<std::string>& f, long line) {
    if (f[0].empty()) throw IngestError(source, line, "empty match_id");
    if (!ids.insert(f[0]).second) throw IngestError(source, line, "duplicate match_id '" + f[0] + "'");
    MatchRow row;
    row.meta.match_id = f[0];
    row.meta.league = f[1];
    row.meta.season = parse_int(f[2], "season");
    row.meta.date = f[3];
    row.meta.home_team = f[4];
    row.meta.away_team = f[5];
    row.timeline = parse_events(f[6]);
    rows.push_back(std::move(row));
  });
  return rows;
}

std::vector<MatchRow> load_matches(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_matches(in, path.string());
}

MinuteWeights estimate_weights(const std::vector<MatchTimeline>& timelines) {
  std::vector<double> counts(kMinutes, 0.0);
  double total = 0.0;
  for (const auto& tl : timelines)
    for (const auto& e : tl.events())
      if (e.kind == EventKind::goal) {
        counts[e.minute - 1] += 1.0;
        total += 1.0;
      }
  if (total == 0.0) throw std::invalid_argument("no goals to estimate minute weights from; use uniform weights");
  for (auto& c : counts) c /= total;
  return MinuteWeights(counts);
}

std::map<std::string, MinuteWeights> estimate_weights(const std::vector<MatchRow>& matches) {
  std::map<std::string, std::vector<MatchTimeline>> by_league;
  for (const auto& m : matches) by_league[m.meta.league].push_back(m.timeline);
  std::map<std::string, MinuteWeights> out;
  for (const auto& [league, tls] : by_league) {
    try {
      out.emplace(league, estimate_weights(tls));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("league " + league + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, MinuteWeights> load_weights(std::istream& in, const std::string& source) {
  std::map<std::string, std::vector<double>> raw;
  std::map<std::string, std::vector<bool>> seen;
  read_table(in, source, kWeightsHeader, [&](const std::vector<std::string>& f, long line) {
    const int minute = parse_int(f[1], "minute");
    if (minute < 1 || minute > kMinutes) throw IngestError(source, line, "minute outside 1..90");
    auto& w = raw.try_emplace(f[0], kMinutes, 0.0).first->second;
    auto& s = seen.try_emplace(f[0], kMinutes, false).first->second;
    if (s[minute - 1]) throw IngestError(source, line, "duplicate minute " + f[1] + " for league " + f[0]);
    s[minute - 1] = true;
    w[minute - 1] = parse_double(f[2], "weight");
  });
  std::map<std::string, MinuteWeights> out;
  for (const auto& [league, w] : raw) {
    const auto& s = seen[league];
    if (std::count(s.begin(), s.end(), true) != kMinutes)
      throw std::invalid_argument(source + ": league " + league + " does not list all 90 minutes");
    try {
      out.emplace(league, MinuteWeights(w));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(source + ": league " + league + ": " + e.what());
    }
  }
  if (out.empty()) throw std::invalid_argument(source + ": no weights");
  return out;
}

std::map<std::string, MinuteWeights> load_weights(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_weights(in, path.string());
}

void write_weights(std::ostream& out, const std::map<std::string, MinuteWeights>& weights) {
  out << join(kWeightsHeader) << '\n';
  for (const auto& [league, w] : weights)
    for (int t = 1; t <= kMinutes; ++t) out << csv_escape(league) << ',' << t << ',' << format_double(w.at(t)) << '\n';
}

std::vector<OddsRecord> load_odds(std::istream& in, const std::string& source) {
  std::vector<OddsRecord> records;
  std::map<std::string, std::size_t> index;
  std::set<std::string> bare;  // ids with a 1X2-only row
  read_table(in, source, kOddsHeader, [&](const std::vector<std::string>& f, long line) {
    const std::string& id = f[0];
    if (id.empty()) throw IngestError(source, line, "empty match_id");
    const double h = parse_double(f[1], "odds_h"), d = parse_double(f[2], "odds_d"), a = parse_double(f[3], "odds_a");
    auto [it, fresh] = index.try_emplace(id, records.size());
    if (fresh) records.push_back({id, h, d, a, {}});
    OddsRecord& rec = records[it->second];
    if (rec.home_odds != h || rec.draw_odds != d || rec.away_odds != a)
      throw IngestError(source, line, "1X2 odds differ from an earlier row of match " + id);
    const bool no_line = f[4].empty() && f[5].empty() && f[6].empty();
    if (no_line) {
      if (!bare.insert(id).second) throw IngestError(source, line, "duplicate 1X2-only row for match " + id);
    } else {
      const OverUnderLine ou{parse_double(f[4], "threshold"), parse_double(f[5], "over"), parse_double(f[6], "under")};
      for (const auto& l : rec.ou_lines)
        if (l.threshold == ou.threshold)
          throw IngestError(source, line, "duplicate (match_id, threshold) (" + id + ", " + f[4] + ")");
      rec.ou_lines.push_back(ou);
    }
    try {
      rec.validate();
    } catch (const std::invalid_argument& e) {
      throw IngestError(source, line, e.what());
    }
  });
  return records;
}

std::vector<OddsRecord> load_odds(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_odds(in, path.string());
}

OddsJoin join_odds(const std::vector<MatchRow>& matches, const std::vector<OddsRecord>& odds) {
  OddsJoin out;
  std::set<std::string> ids;
  for (const auto& m : matches) ids.insert(m.meta.match_id);
  for (const auto& o : odds) {
    if (ids.contains(o.match_id))
      out.by_match.emplace(o.match_id, o);
    else
      out.unmatched_odds.push_back(o.match_id);
  }
  for (const auto& m : matches)
    if (!out.by_match.contains(m.meta.match_id)) out.matches_without_odds.push_back(m.meta.match_id);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, p);
}

namespace {

void write_rows(std::ostream& out, const std::vector<MatchRecord>& records) {
  for (const auto& r : records) {
    out << csv_escape(r.match_id) << ',' << csv_escape(r.league) << ',' << r.season << ','
        << csv_escape(r.date) << ',' << csv_escape(r.home_team) << ',' << csv_escape(r.away_team)
        << ',' << format_double(r.lambda_home) << ',' << format_double(r.lambda_away) << ','
        << format_double(r.pre_match.home) << ',' << format_double(r.pre_match.draw) << ','
        << format_double(r.pre_match.away) << ',' << format_double(r.suspense) << ','
        << format_double(r.surprise) << '\n';
  }
}

}  // namespace

void persist_excitement(std::ostream& out, const std::vector<MatchRecord>& records,
                        const std::vector<std::string>& provenance) {
  out << kExcitementTag << '\n';
  for (const auto& p : provenance) out << "# " << p << '\n';
  out << join(kExcitementHeader) << '\n';
  write_rows(out, records);
}

void persist_excitement(const std::filesystem::path& path, const std::vector<MatchRecord>& records,
                        const std::vector<std::string>& provenance, bool append) {
  const bool existing = append && std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
  if (existing) {
    auto in = open_in(path);
    std::string first;
    std::getline(in, first);
    if (strip_cr(first) != kExcitementTag)
      throw std::runtime_error(path.string() + ": cannot append, version tag mismatch");
  }
  std::ofstream out(path, existing ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (existing)
    write_rows(out, records);
  else
    persist_excitement(out, records, provenance);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<MatchRecord> load_excitement(std::istream& in, const std::string& source) {
  std::vector<MatchRecord> out;
  std::string line;
  long n = 0;
  bool tagged = false, headed = false;
  while (std::getline(in, line)) {
    ++n;
    line = strip_cr(line);
    if (line.rfind("# suspensekit-excitement", 0) == 0) {
      if (line != kExcitementTag) throw IngestError(source, n, "version tag '" + line + "' is not '" + kExcitementTag + "'");
      tagged = true;
      headed = false;
      continue;
    }
    if (is_comment(line) || is_blank(line)) continue;
    if (!tagged) throw IngestError(source, n, std::string("missing version tag '") + kExcitementTag + "'");
    const auto f = split_csv_line(line);
    if (!headed) {
      if (f != kExcitementHeader) throw IngestError(source, n, "expected header '" + join(kExcitementHeader) + "'");
      headed = true;
      continue;
    }
    if (f.size() != kExcitementHeader.size()) throw IngestError(source, n, "wrong field count");
    try {
      MatchRecord r;
      r.match_id = f[0];
      r.league = f[1];
      r.season = parse_int(f[2], "season");
      r.date = f[3];
      r.home_team = f[4];
      r.away_team = f[5];
      r.lambda_home = parse_double(f[6], "lambda_home");
      r.lambda_away = parse_double(f[7], "lambda_away");
      r.pre_match = {parse_double(f[8], "p_home"), parse_double(f[9], "p_draw"), parse_double(f[10], "p_away")};
      r.suspense = parse_double(f[11], "suspense");
      r.surprise = parse_double(f[12], "surprise");
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw IngestError(source, n, e.what());
    }
  }
  if (!tagged) throw IngestError(source, n, std::string("missing version tag '") + kExcitementTag + "'");
  return out;
}

std::vector<MatchRecord> load_excitement(const std::filesystem::path& path) {
  auto in = open_in(path);
  return load_excitement(in, path.string());
}

}  // namespace sk
