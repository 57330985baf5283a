#include "cybergeo/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return month == 2 && leap ? 29 : kDays[month - 1];
}

bool is_lower_ascii(std::string_view s) {
  for (char c : s)
    if (c < 'a' || c > 'z') return false;
  return true;
}

}  // namespace

std::string_view to_string(PlaceKind kind) { return kind == PlaceKind::City ? "city" : "country"; }

std::string_view to_string(MatchClass cls) {
  switch (cls) {
    case MatchClass::CityCountryPair: return "pair";
    case MatchClass::Country: return "country";
    case MatchClass::City: return "city";
  }
  return "unknown";
}

std::string_view to_string(Label label) { return label == Label::Bot ? "bot" : "human"; }

std::optional<MatchClass> parse_match_class(std::string_view text) {
  if (text == "pair") return MatchClass::CityCountryPair;
  if (text == "country") return MatchClass::Country;
  if (text == "city") return MatchClass::City;
  return std::nullopt;
}

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
  if (text.size() < 7 || text[4] != '-') return std::nullopt;
  YearMonth ym;
  if (!parse_int(text.substr(0, 4), ym.year) || !parse_int(text.substr(5, 2), ym.month))
    return std::nullopt;
  if (ym.month < 1 || ym.month > 12) return std::nullopt;
  if (text.size() == 7) return ym;
  // Full date: YYYY-MM-DD followed by nothing or a time part.
  if (text.size() < 10 || text[7] != '-') return std::nullopt;
  int day = 0;
  if (!parse_int(text.substr(8, 2), day)) return std::nullopt;
  if (day < 1 || day > days_in_month(ym.year, ym.month)) return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  return ym;
}

std::string YearMonth::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
  return buf;
}

bool is_valid_language(std::string_view lang) {
  return (lang.size() == 2 || lang.size() == 3) && is_lower_ascii(lang);
}

bool is_iso2(std::string_view code) {
  return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' && code[1] <= 'Z';
}

std::string canonical_language(std::string_view raw) {
  std::string lang(trim(raw));
  for (char& c : lang)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return is_valid_language(lang) ? lang : std::string(kUndefinedLanguage);
}

std::optional<std::string> check_user(const UserRecord& user) {
  if (user.user_id.empty()) return "missing user_id";
  return std::nullopt;
}

std::optional<std::string> check_tweet(const TweetRecord& tweet) {
  if (tweet.tweet_id.empty()) return "missing tweet_id";
  if (tweet.user_id.empty()) return "missing user_id";
  if (tweet.month.size() != 7 || !YearMonth::parse(tweet.month)) return "unparseable month";
  if (!is_valid_language(tweet.lang)) return "invalid lang";
  for (const auto& tag : tweet.hashtags)
    if (tag.empty()) return "empty hashtag";
  return std::nullopt;
}

void validate_entry(const GazetteerEntry& entry) {
  if (entry.name_normalized.empty()) throw std::invalid_argument("gazetteer entry without a name");
  if (normalize_name(entry.name_normalized) != entry.name_normalized)
    throw std::invalid_argument("gazetteer name is not normalized: " + entry.name_normalized);
  if (!is_iso2(entry.country_iso2))
    throw std::invalid_argument("invalid country code: " + entry.country_iso2);
  if (!(entry.lat >= -90.0 && entry.lat <= 90.0) || !(entry.lon >= -180.0 && entry.lon <= 180.0))
    throw std::invalid_argument("coordinates out of range for " + entry.name_normalized);
  for (const auto& a : entry.aliases)
    if (a.empty() || a == entry.name_normalized || normalize_name(a) != a)
      throw std::invalid_argument("bad alias for " + entry.name_normalized + ": '" + a + "'");
}

GeoMatch GeoMatch::create(std::string country_iso2, double lat, double lon, double similarity,
                          MatchClass match_class, std::string matched_name, double threshold) {
  if (!(similarity > threshold) || similarity > 1.0)
    throw std::invalid_argument("GeoMatch similarity must lie in (threshold, 1]");
  if (!is_iso2(country_iso2)) throw std::invalid_argument("invalid country code: " + country_iso2);
  GeoMatch m;
  m.country_iso2_ = std::move(country_iso2);
  m.lat_ = lat;
  m.lon_ = lon;
  m.similarity_ = similarity;
  m.match_class_ = match_class;
  m.matched_name_ = std::move(matched_name);
  return m;
}

BotLabel BotLabel::create(std::string user_id, double probability, double threshold) {
  if (user_id.empty()) throw std::invalid_argument("BotLabel without user_id");
  if (!(probability >= 0.0 && probability <= 1.0))
    throw std::invalid_argument("bot probability outside [0,1]");
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw std::invalid_argument("bot threshold outside (0,1]");
  BotLabel b;
  b.user_id_ = std::move(user_id);
  b.probability_ = probability;
  b.label_ = probability >= threshold ? Label::Bot : Label::Human;
  return b;
}

std::size_t ValidationReport::count(std::string_view reason) const {
  std::size_t n = 0;
  for (const auto& issue : issues) n += issue.reason == reason;
  return n;
}

ValidationReport validate_dataset(const std::vector<UserRecord>& users,
                                  const std::vector<TweetRecord>& tweets) {
  ValidationReport report;
  std::unordered_set<std::string> known;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const auto& u = users[i];
    std::optional<std::string> reason = check_user(u);
    if (!reason && !known.insert(u.user_id).second) reason = "duplicate user_id";
    if (reason) {
      ++report.invalid_users;
      report.issues.push_back({RecordKind::User, i, u.user_id, *reason});
    } else {
      ++report.valid_users;
    }
  }
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const auto& t = tweets[i];
    std::optional<std::string> reason = check_tweet(t);
    if (!reason && !known.contains(t.user_id)) reason = "orphan tweet";
    if (reason) {
      ++report.invalid_tweets;
      report.issues.push_back({RecordKind::Tweet, i, t.tweet_id, *reason});
    } else {
      ++report.valid_tweets;
    }
  }
  return report;
}

}  // namespace cybergeo
