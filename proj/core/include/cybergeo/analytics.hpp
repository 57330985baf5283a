#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cybergeo/ingest.hpp"
#include "cybergeo/model.hpp"

namespace cybergeo {

struct GeoRow;

// Where each user is and whether it is a bot.
struct Attribution {
  std::unordered_map<std::string, std::string> country;  // geolocated users only
  std::unordered_map<std::string, Label> label;
  // Unlabeled users count as Human unless this is set, in which case they
  // are left out of every metric.
  bool drop_unlabeled = false;

  const std::string* country_of(const std::string& user) const;
  std::optional<Label> label_of(const std::string& user) const;
};

Attribution make_attribution(const std::vector<GeoRow>& geo, const std::vector<BotLabel>& labels,
                             bool drop_unlabeled = false);

// Median of the values; mean of the middle two for an even count. Throws
// std::invalid_argument when empty.
double median(std::vector<double> values);
double mean(const std::vector<double>& values);

// ----------------------------------------------------------------------------
// Country
// ----------------------------------------------------------------------------

// Unique geolocated authors of the slice per country, sorted by iso2.
// Countries without users are omitted. When the slice has no bots every
// bot_share is 0 with share_defined false.
std::vector<CountryMetrics> country_bot_metrics(const std::vector<TweetRecord>& slice,
                                                const Attribution& attribution,
                                                std::string_view month);

// "ALL" rows: bot_rate and bot_share are medians over the months in which
// the country appears (bot_share only over months where it is defined);
// n_users and n_bots are taken from `overall`, the metrics of the whole
// period.
std::vector<CountryMetrics> aggregate_median(const std::vector<std::vector<CountryMetrics>>& monthly,
                                             const std::vector<CountryMetrics>& overall);

// ----------------------------------------------------------------------------
// Language
// ----------------------------------------------------------------------------

struct LanguageMetrics {
  std::string lang;
  std::string month;
  std::size_t n_months = 1;
  std::size_t n_users = 0;
  std::size_t n_bots = 0;
  double bot_rate = 0.0;

  bool operator==(const LanguageMetrics&) const = default;
};

// A user is counted once in every language it tweeted in. Sorted by lang.
std::vector<LanguageMetrics> language_bot_metrics(const std::vector<TweetRecord>& slice,
                                                  const Attribution& attribution,
                                                  std::string_view month);

// bot_rate is the mean over the months where the language appears; counts
// come from `overall`.
std::vector<LanguageMetrics> aggregate_mean(const std::vector<std::vector<LanguageMetrics>>& monthly,
                                            const std::vector<LanguageMetrics>& overall);

// Highest bot_rate first, then more users, then language code.
std::vector<LanguageMetrics> top_n(std::vector<LanguageMetrics> metrics,
                                   std::size_t n = kDefaultTopLanguages);

// ----------------------------------------------------------------------------
// Dominant language
// ----------------------------------------------------------------------------

struct DominantLanguageMetrics {
  std::string country_iso2;
  std::string month;
  std::size_t n_months = 1;
  std::size_t n_bots = 0;      // bots affiliated with the country
  std::size_t n_dominant = 0;  // of those, bots with a tweet in a dominant language
  double fraction = 0.0;

  bool operator==(const DominantLanguageMetrics&) const = default;
};

// Countries of the table with at least one affiliated bot, sorted by iso2.
std::vector<DominantLanguageMetrics> dominant_language_fraction(
    const std::vector<TweetRecord>& slice, const Attribution& attribution,
    const DominantLanguageTable& table, std::string_view month);

// fraction is the mean over months where the country appears; counts come
// from `overall`.
std::vector<DominantLanguageMetrics> aggregate_mean(
    const std::vector<std::vector<DominantLanguageMetrics>>& monthly,
    const std::vector<DominantLanguageMetrics>& overall);

struct LanguageCount {
  std::string lang;
  std::size_t n_tweets = 0;

  bool operator==(const LanguageCount&) const = default;
};

struct LanguageBreakdown {
  std::string country_iso2;
  double fraction = 0.0;
  std::vector<LanguageCount> languages;  // most tweets first, then code

  bool operator==(const LanguageBreakdown&) const = default;
};

// Countries whose fraction is strictly below `threshold`, with the languages
// of their bots' tweets in `tweets`.
std::vector<LanguageBreakdown> under_threshold_breakdown(
    const std::vector<DominantLanguageMetrics>& aggregated, const std::vector<TweetRecord>& tweets,
    const Attribution& attribution, double threshold = kDefaultDominantThreshold);

// ----------------------------------------------------------------------------
// Regression
// ----------------------------------------------------------------------------

// Ordinary least squares of y on x. Throws std::invalid_argument for fewer
// than 2 points, mismatched lengths, non-finite values, or constant x
// ("degenerate regressor"). Constant y gives r_squared 0 and degenerate.
RegressionResult linear_regression(const std::vector<double>& x, const std::vector<double>& y);

struct IndicatorRegression {
  std::string indicator;  // "gdp_usd" or "population"
  std::string metric;     // "bot_rate"
  std::optional<RegressionResult> result;  // absent when not computable
  std::string note;
};

// Regresses the aggregate bot_rate of every country present in both inputs
// against each indicator.
std::vector<IndicatorRegression> regress_indicators(const std::vector<CountryMetrics>& aggregate,
                                                    const IndicatorTable& indicators);

// ----------------------------------------------------------------------------
// Hashtags
// ----------------------------------------------------------------------------

struct HashtagCount {
  std::string tag;
  std::size_t count = 0;

  bool operator==(const HashtagCount&) const = default;
};

struct RegionHashtagResult {
  std::string region;
  std::vector<HashtagCount> top;  // count descending, then tag

  bool operator==(const RegionHashtagResult&) const = default;
};

inline constexpr std::size_t kDefaultTopHashtags = 5;

// Normalized hashtags of bot-authored tweets per region, ignore list
// applied. Every region of the table gets a row, possibly empty; rows are
// sorted by region name.
std::vector<RegionHashtagResult> region_hashtags(const std::vector<TweetRecord>& tweets,
                                                 const Attribution& attribution,
                                                 const RegionTable& regions,
                                                 const HashtagIgnoreList& ignore,
                                                 std::size_t top = kDefaultTopHashtags);

}  // namespace cybergeo
