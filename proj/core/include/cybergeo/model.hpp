#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cybergeo {

inline constexpr double kDefaultMatchThreshold = 0.80;
inline constexpr double kDefaultBotThreshold = 0.5;
inline constexpr std::size_t kDefaultTopLanguages = 30;
inline constexpr double kDefaultDominantThreshold = 0.8;
inline constexpr std::uint64_t kDefaultSeed = 42;

// Language bucket for tweets with a missing or unrecognised language tag.
inline constexpr std::string_view kUndefinedLanguage = "und";
inline constexpr std::string_view kAllMonths = "ALL";

enum class PlaceKind : std::uint8_t { City, Country };

// Declaration order is the evaluation order used by match_location.
enum class MatchClass : std::uint8_t { CityCountryPair = 0, Country = 1, City = 2 };
inline constexpr MatchClass kMatchOrder[] = {MatchClass::CityCountryPair, MatchClass::Country,
                                             MatchClass::City};

enum class Label : std::uint8_t { Human, Bot };

std::string_view to_string(PlaceKind kind);
std::string_view to_string(MatchClass cls);
std::string_view to_string(Label label);
std::optional<MatchClass> parse_match_class(std::string_view text);

// Calendar month used as the partition key of every monthly metric.
struct YearMonth {
  int year = 0;
  int month = 0;

  // Accepts "YYYY-MM" and also any ISO-8601 date/time starting with
  // "YYYY-MM-DD"; the day must be valid for the month.
  static std::optional<YearMonth> parse(std::string_view text);
  std::string to_string() const;
  auto operator<=>(const YearMonth&) const = default;
};

struct UserRecord {
  std::string user_id;
  std::string description;
  std::optional<std::string> raw_lang_hint;

  bool operator==(const UserRecord&) const = default;
};

struct TweetRecord {
  std::string tweet_id;
  std::string user_id;
  std::string text;
  std::string lang{kUndefinedLanguage};
  std::string month;
  std::vector<std::string> hashtags;

  bool operator==(const TweetRecord&) const = default;
};

// Lowercase 2-3 letter code, or "und".
bool is_valid_language(std::string_view lang);
bool is_iso2(std::string_view code);

// Maps a raw platform tag to a valid language bucket ("und" when unusable).
std::string canonical_language(std::string_view raw);

// Returns the reason a record is invalid, or nullopt.
std::optional<std::string> check_user(const UserRecord& user);
std::optional<std::string> check_tweet(const TweetRecord& tweet);

struct GazetteerEntry {
  PlaceKind kind = PlaceKind::City;
  std::string name_normalized;
  std::vector<std::string> aliases;  // normalized, excluding name_normalized
  std::string country_iso2;
  double lat = 0.0;
  double lon = 0.0;
  std::uint64_t population = 0;

  bool operator==(const GazetteerEntry&) const = default;
};

// Throws std::invalid_argument when an entry breaks its invariants.
void validate_entry(const GazetteerEntry& entry);

// A resolved location. Only constructible with a similarity strictly above
// the threshold it was matched under.
class GeoMatch {
 public:
  static GeoMatch create(std::string country_iso2, double lat, double lon, double similarity,
                         MatchClass match_class, std::string matched_name,
                         double threshold = kDefaultMatchThreshold);

  const std::string& country_iso2() const { return country_iso2_; }
  double lat() const { return lat_; }
  double lon() const { return lon_; }
  double similarity() const { return similarity_; }
  MatchClass match_class() const { return match_class_; }
  const std::string& matched_name() const { return matched_name_; }

  bool operator==(const GeoMatch&) const = default;

 private:
  GeoMatch() = default;

  std::string country_iso2_;
  double lat_ = 0.0;
  double lon_ = 0.0;
  double similarity_ = 0.0;
  MatchClass match_class_ = MatchClass::City;
  std::string matched_name_;
};

class BotLabel {
 public:
  // Label is Bot iff probability >= threshold.
  static BotLabel create(std::string user_id, double probability,
                         double threshold = kDefaultBotThreshold);

  const std::string& user_id() const { return user_id_; }
  double probability() const { return probability_; }
  Label label() const { return label_; }
  bool is_bot() const { return label_ == Label::Bot; }

  bool operator==(const BotLabel&) const = default;

 private:
  BotLabel() = default;

  std::string user_id_;
  double probability_ = 0.0;
  Label label_ = Label::Human;
};

struct CountryMetrics {
  std::string country_iso2;
  std::string month;           // "YYYY-MM" or "ALL"
  std::size_t n_months = 1;    // months contributing to an aggregate row
  std::size_t n_users = 0;     // unique geolocated authors
  std::size_t n_bots = 0;      // unique authors labelled Bot
  double bot_rate = 0.0;       // n_bots / n_users
  double bot_share = 0.0;      // n_bots / bots across all countries of the slice
  bool share_defined = false;  // false when the slice has no bots at all

  bool operator==(const CountryMetrics&) const = default;
};

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
  bool degenerate = false;  // constant response; r_squared reported as 0
};

enum class RecordKind : std::uint8_t { User, Tweet };

struct ValidationIssue {
  RecordKind kind;
  std::size_t index;  // position in the input list
  std::string id;
  std::string reason;

  bool operator==(const ValidationIssue&) const = default;
};

struct ValidationReport {
  std::size_t valid_users = 0;
  std::size_t invalid_users = 0;
  std::size_t valid_tweets = 0;
  std::size_t invalid_tweets = 0;
  std::vector<ValidationIssue> issues;

  std::size_t count(std::string_view reason) const;
};

// Reasons: "missing user_id", "duplicate user_id", "missing tweet_id",
// "unparseable month", "invalid lang", "empty hashtag", "orphan tweet".
ValidationReport validate_dataset(const std::vector<UserRecord>& users,
                                  const std::vector<TweetRecord>& tweets);

}  // namespace cybergeo
