#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cybergeo/model.hpp"

namespace cybergeo {

struct LoadStats {
  std::size_t lines = 0;       // non-blank input lines
  std::size_t loaded = 0;      // records kept
  std::size_t skipped = 0;     // malformed lines
  std::size_t duplicates = 0;  // repeated ids, last occurrence kept
  std::vector<std::string> warnings;
};

template <typename T>
struct Loaded {
  T value;
  LoadStats stats;
};

// Users: one JSON object per line, {user_id, description?, lang?}. Ids may
// be strings or integers and are kept as strings.
Loaded<std::vector<UserRecord>> load_users(std::istream& in);
Loaded<std::vector<UserRecord>> load_users(const std::filesystem::path& path);

// Tweets: {tweet_id, user_id, text?, lang?, created_at | month, hashtags?}.
// lang is mapped through canonical_language; the month comes from `month`
// when present, else from created_at. Hashtags are strings or {"text": ...}
// objects; a leading '#' is dropped and empty tags are discarded.
Loaded<std::vector<TweetRecord>> load_tweets(std::istream& in);
Loaded<std::vector<TweetRecord>> load_tweets(const std::filesystem::path& path);

// month -> tweets of that month, input order kept inside each month.
std::map<std::string, std::vector<TweetRecord>> partition_by_month(
    const std::vector<TweetRecord>& tweets);

// NFKC with case folding, then every codepoint that is not a letter, digit
// or combining mark removed. Returns "" for a tag that should be discarded.
std::string normalize_hashtag(std::string_view raw);

using DominantLanguageTable = std::map<std::string, std::vector<std::string>>;

struct Indicators {
  double gdp_usd = 0.0;
  double population = 0.0;

  bool operator==(const Indicators&) const = default;
};
using IndicatorTable = std::map<std::string, Indicators>;

using RegionTable = std::map<std::string, std::string>;  // iso2 -> region
using HashtagIgnoreList = std::set<std::string>;         // normalized tags

// `iso2,langs` with langs ';'-separated.
Loaded<DominantLanguageTable> load_dominant_languages(std::istream& in);
Loaded<DominantLanguageTable> load_dominant_languages(const std::filesystem::path& path);
// `iso2,gdp_usd,population`; both values must be finite and positive.
Loaded<IndicatorTable> load_indicators(std::istream& in);
Loaded<IndicatorTable> load_indicators(const std::filesystem::path& path);
// `iso2,region`.
Loaded<RegionTable> load_regions(std::istream& in);
Loaded<RegionTable> load_regions(const std::filesystem::path& path);
// The shipped region table (US, CA, RU, CN, IN, ID plus Africa and Asia).
const RegionTable& builtin_regions();
// Sorted distinct region names.
std::vector<std::string> region_names(const RegionTable& regions);

// One tag per line, passed through normalize_hashtag. A line that is "#"
// alone or starts with "# " is a comment; "#tag" is the tag.
HashtagIgnoreList parse_ignore_list(std::string_view text);
HashtagIgnoreList load_ignore_list(const std::filesystem::path& path);
const HashtagIgnoreList& builtin_ignore_list();

}  // namespace cybergeo
