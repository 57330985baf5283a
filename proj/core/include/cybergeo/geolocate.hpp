#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cybergeo/gazetteer.hpp"
#include "cybergeo/model.hpp"

namespace cybergeo {

enum class CandidateSource : std::uint8_t { EntityExtractor, CapitalizedNGram, PairSynthesis };

struct CandidateSpan {
  std::string text;
  CandidateSource source = CandidateSource::CapitalizedNGram;

  bool operator==(const CandidateSpan&) const = default;
};

class Stopwords {
 public:
  // The multilingual list shipped in core/data/stopwords.txt.
  static const Stopwords& builtin();
  // One token per line; blank lines and '#' comments ignored. Tokens are
  // lowercased on load.
  static Stopwords parse(std::string_view text);

  bool contains(std::string_view lowered) const { return words_.contains(std::string(lowered)); }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

// Replaces URLs, @mentions and emoji with segment breaks.
std::string strip_noise(std::string_view description);

// Candidate location spans of a profile description, in this order:
//  1. capitalized runs of 1-3 tokens and short (1-3 token) comma-separated
//     segments, by position;
//  2. only when no capitalized run exists: 1-3-grams over the runs of
//     non-stopword tokens;
//  3. "A, B" for every pair of positionally adjacent spans from step 1 (or
//     adjacent unigrams from step 2).
// A lone capitalized token that opens a sentence and is followed by a
// lowercase word is treated as ordinary sentence capitalisation. Spans are
// deduplicated on their normalized form, first occurrence kept.
std::vector<CandidateSpan> extract_candidates(std::string_view description,
                                              const Stopwords& stopwords = Stopwords::builtin());

// Candidates supplied by an external entity recogniser: the spans
// themselves plus "A, B" for each adjacent pair.
std::vector<CandidateSpan> candidates_from_entities(const std::vector<std::string>& spans);

// user_id -> spans, from lines of the form "user_id<TAB>span1|span2|...".
using EntityMap = std::unordered_map<std::string, std::vector<std::string>>;
EntityMap load_entity_file(std::istream& in);
EntityMap load_entity_file(const std::filesystem::path& path);

// Records which match classes were consulted, in order.
struct MatchTrace {
  std::vector<MatchClass> consulted;
};

// Evaluates pair, country and city keys in that fixed order; the first
// class in which any candidate scores strictly above `threshold` wins, and
// inside it the best-ranked key wins (see GazetteerIndex::best_match).
std::optional<GeoMatch> match_location(const std::vector<CandidateSpan>& candidates,
                                       const GazetteerIndex& index,
                                       double threshold = kDefaultMatchThreshold,
                                       MatchTrace* trace = nullptr);

struct GeolocateOptions {
  double threshold = kDefaultMatchThreshold;
  const EntityMap* entities = nullptr;  // when set, replaces heuristic extraction
  const Stopwords* stopwords = nullptr;  // defaults to Stopwords::builtin()
};

// Memoization key of a description: whitespace collapsed and trimmed. Case
// is preserved because extraction is case sensitive.
std::string description_key(std::string_view description);

// Geolocates single users with a thread-safe memo keyed on the description
// (or on the supplied entity spans).
class Geolocator {
 public:
  Geolocator(const GazetteerIndex& index, GeolocateOptions options = {});

  std::optional<GeoMatch> locate(const UserRecord& user) const;
  std::vector<CandidateSpan> candidates(const UserRecord& user) const;
  std::size_t cache_size() const;

 private:
  std::string cache_key(const UserRecord& user) const;

  const GazetteerIndex& index_;
  GeolocateOptions options_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, std::optional<GeoMatch>> cache_;
};

// Geolocates every user. Distinct descriptions are resolved once each and
// split into fixed contiguous chunks across `threads` workers, so results
// are identical for any thread count.
std::vector<std::optional<GeoMatch>> geolocate_users(const std::vector<UserRecord>& users,
                                                     const GazetteerIndex& index,
                                                     const GeolocateOptions& options = {},
                                                     std::size_t threads = 1);

// Per-user geolocation file:
// user_id,country_iso2,lat,lon,similarity,match_class (header row, RFC-4180).
struct GeoRow {
  std::string user_id;
  std::string country_iso2;
  double lat = 0.0;
  double lon = 0.0;
  double similarity = 0.0;
  MatchClass match_class = MatchClass::City;

  bool operator==(const GeoRow&) const = default;
};

// Rows for matched users only, in input order.
std::string format_geolocations(const std::vector<UserRecord>& users,
                                const std::vector<std::optional<GeoMatch>>& matches);
std::vector<GeoRow> read_geolocations(std::istream& in);
std::vector<GeoRow> read_geolocations(const std::filesystem::path& path);

}  // namespace cybergeo
