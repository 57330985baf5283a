#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

#include "cybergeo/model.hpp"
#include "cybergeo/similarity.hpp"

namespace cybergeo {

// ----------------------------------------------------------------------------
// Import
// ----------------------------------------------------------------------------

inline constexpr std::uint64_t kMinCityPopulation = 1000;

struct ImportStats {
  std::size_t rows = 0;
  std::size_t imported = 0;
  std::size_t malformed = 0;       // unparseable or invalid rows, skipped
  std::size_t low_population = 0;  // cities below kMinCityPopulation
  std::size_t duplicates = 0;      // repeated country codes, first kept
  std::vector<std::string> warnings;
};

struct ImportResult {
  std::vector<GazetteerEntry> entries;
  ImportStats stats;
};

// GeoNames city dump: tab separated, no quoting. Columns used (0-based):
// 1 name, 3 alternate names (comma separated), 4 latitude, 5 longitude,
// 8 ISO country code, 14 population.
ImportResult import_cities(std::istream& in);
ImportResult import_cities(const std::filesystem::path& path);

// Country table: CSV with header iso2,name,lat,lon and an optional
// "aliases" column holding ';'-separated alternative names.
ImportResult import_countries(std::istream& in);
ImportResult import_countries(const std::filesystem::path& path);

// ----------------------------------------------------------------------------
// Index
// ----------------------------------------------------------------------------

inline constexpr std::uint32_t kIndexFormatVersion = 1;
inline constexpr std::size_t kLengthBandWidth = 4;

// A query prepared once and reused across classes and buckets.
// Adjacent codepoint pairs hashed into a fixed number of buckets for the
// lookup's bigram posting lists.
inline constexpr std::uint32_t kBigramBuckets = 1024;
inline std::uint32_t bigram_bucket(char32_t a, char32_t b) {
  const std::uint64_t h = (static_cast<std::uint64_t>(a) << 21 | b) * 0x9E3779B97F4A7C15ull;
  return static_cast<std::uint32_t>(h >> 54);
}

using Signature = std::array<std::uint8_t, 16>;
Signature char_signature(std::u32string_view text);

class PreparedQuery {
 public:
  explicit PreparedQuery(std::u32string text);
  static PreparedQuery from_utf8(std::string_view normalized);

  const std::u32string& text() const { return text_; }
  std::size_t size() const { return text_.size(); }
  const LcsPattern& pattern() const { return pattern_; }
  const Signature& signature() const { return signature_; }
  std::size_t signature_excess() const { return signature_excess_; }
  // (bucket, occurrences) for each distinct bigram bucket, by bucket.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& bigrams() const { return bigrams_; }

 private:
  std::u32string text_;
  LcsPattern pattern_;
  Signature signature_{};
  std::size_t signature_excess_ = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> bigrams_;
};

struct KeyMatch {
  std::uint32_t entry = 0;  // index into GazetteerIndex::entries()
  std::uint32_t key = 0;    // index into the class key table
  double similarity = 0.0;
  std::size_t lcs = 0;

  bool operator==(const KeyMatch&) const = default;
};

// Immutable lookup structure over gazetteer entries. Every entry is
// reachable under three key classes: "city, country" pair keys, country
// names and city names (primary name and aliases). Within a class, keys are
// grouped into length bands of kLengthBandWidth codepoints; a lookup only
// visits bands whose lengths can reach the threshold, and skips keys whose
// character-count bound on the LCS cannot reach it.
class GazetteerIndex {
 public:
  // Throws std::invalid_argument("empty gazetteer") for no entries, and for
  // any entry failing validate_entry.
  static GazetteerIndex build(std::vector<GazetteerEntry> entries);

  static GazetteerIndex deserialize(std::string_view bytes);
  static GazetteerIndex load(const std::filesystem::path& path);
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  std::size_t city_count() const;
  std::size_t country_count() const;
  std::size_t alias_count() const;
  std::size_t key_count(MatchClass cls) const { return table(cls).size(); }
  std::string key_text(MatchClass cls, std::uint32_t key) const;

  // Best key strictly above threshold, with ties broken by higher entry
  // population, then smaller key text, then smaller entry name, then entry
  // position. Keys below at_least may be skipped, so a caller holding a
  // match from another query passes its similarity to prune harder.
  std::optional<KeyMatch> best_match(MatchClass cls, const PreparedQuery& query,
                                     double threshold = kDefaultMatchThreshold,
                                     double at_least = 0.0) const;
  // Reference path: scores every key of the class.
  std::optional<KeyMatch> best_match_full_scan(MatchClass cls, const PreparedQuery& query,
                                               double threshold = kDefaultMatchThreshold) const;

  // Keys that survive length and character-count pruning (no best-so-far
  // tightening). Every key scoring above threshold is among them.
  std::vector<std::uint32_t> candidate_keys(MatchClass cls, const PreparedQuery& query,
                                            double threshold = kDefaultMatchThreshold) const;
  // Number of non-empty length bands a lookup visits.
  std::size_t buckets_visited(MatchClass cls, const PreparedQuery& query,
                              double threshold = kDefaultMatchThreshold) const;
  std::size_t bucket_count(MatchClass cls) const;

  // True when a ranks strictly ahead of b.
  bool ranks_before(MatchClass cls, const KeyMatch& a, const KeyMatch& b) const;

 private:
  struct KeyTable {
    // Keys sorted by (length, text, entry); keys of length L occupy
    // [by_length[L], by_length[L + 1]).
    std::vector<char32_t> chars;
    std::vector<std::uint32_t> offset;
    std::vector<std::uint32_t> length;
    std::vector<std::uint32_t> entry;
    std::vector<Signature> signature;
    std::vector<std::uint32_t> by_length;
    // Keys of length L holding a bigram of bucket g (see bigram_bucket), at
    // postings[posting_start[L * kBigramBuckets + g] .. [... + g + 1]).
    std::vector<std::uint32_t> posting_start;
    std::vector<std::uint32_t> postings;

    std::size_t size() const { return entry.size(); }
    std::u32string_view text(std::uint32_t k) const {
      return {chars.data() + offset[k], length[k]};
    }
    std::size_t max_length() const { return by_length.empty() ? 0 : by_length.size() - 2; }
  };

  GazetteerIndex() = default;
  void build_tables();
  const KeyTable& table(MatchClass cls) const { return tables_[static_cast<std::size_t>(cls)]; }

  template <typename Visit>
  void scan_lengths(const KeyTable& t, std::size_t la, double threshold, Visit&& visit) const;

  std::vector<GazetteerEntry> entries_;
  std::array<KeyTable, 3> tables_;
};

// Counts of codepoints modulo 32 saturated at 15, two classes per byte
// (class i low nibble, class i + 16 high). The sum of per-class minima
// plus signature_excess(a) bounds LCS(a, b) from above.
inline std::size_t signature_bound(const Signature& a, const Signature& b) {
#if defined(__SSE2__)
  const __m128i low = _mm_set1_epi8(0x0F);
  const __m128i va = _mm_loadu_si128(reinterpret_cast<const __m128i*>(a.data()));
  const __m128i vb = _mm_loadu_si128(reinterpret_cast<const __m128i*>(b.data()));
  const __m128i lo = _mm_min_epu8(_mm_and_si128(va, low), _mm_and_si128(vb, low));
  const __m128i hi = _mm_min_epu8(_mm_and_si128(_mm_srli_epi16(va, 4), low),
                                  _mm_and_si128(_mm_srli_epi16(vb, 4), low));
  const __m128i s = _mm_sad_epu8(_mm_add_epi8(lo, hi), _mm_setzero_si128());
  return static_cast<std::size_t>(_mm_cvtsi128_si64(s) + _mm_cvtsi128_si64(_mm_unpackhi_epi64(s, s)));
#else
  std::size_t total = 0;
  for (std::size_t i = 0; i < 16; ++i)
    total += std::min(a[i] & 15, b[i] & 15) + std::min(a[i] >> 4, b[i] >> 4);
  return total;
#endif
}
// Counts lost to saturation: sum over classes of max(0, count - 15).
std::size_t signature_excess(std::u32string_view text);

}  // namespace cybergeo
