#include "cybergeo/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "cybergeo/csv.hpp"
#include "cybergeo/data.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxWarnings = 50;

void warn(LoadStats& stats, std::string msg) {
  if (stats.warnings.size() < kMaxWarnings) stats.warnings.push_back(std::move(msg));
}

// Ids arrive as strings or integers; floats would already have lost digits.
std::optional<std::string> id_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  std::string id;
  if (it->is_string()) {
    id = std::string(trim(it->get_ref<const std::string&>()));
  } else if (it->is_number_unsigned()) {
    id = std::to_string(it->get<std::uint64_t>());
  } else if (it->is_number_integer()) {
    id = std::to_string(it->get<std::int64_t>());
  } else {
    return std::nullopt;
  }
  if (id.empty()) return std::nullopt;
  return id;
}

std::string string_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

// Calls fn(object, line_number) for every line holding a JSON object;
// other lines are counted as skipped.
template <typename Fn>
void for_each_object(std::istream& in, LoadStats& stats, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    ++stats.lines;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      ++stats.skipped;
      warn(stats, "line " + std::to_string(number) + ": not a JSON object");
      continue;
    }
    fn(obj, number);
  }
}

// Keeps the first position of each id and the last record seen for it.
template <typename Record>
class LastWins {
 public:
  void put(const std::string& id, Record r, std::size_t line, LoadStats& stats,
           std::string_view kind) {
    if (auto it = pos_.find(id); it != pos_.end()) {
      ++stats.duplicates;
      warn(stats, "line " + std::to_string(line) + ": duplicate " + std::string(kind) + " '" + id +
                      "', last occurrence kept");
      out_[it->second] = std::move(r);
      return;
    }
    pos_.emplace(id, out_.size());
    out_.push_back(std::move(r));
  }
  std::vector<Record> take() { return std::move(out_); }

 private:
  std::unordered_map<std::string, std::size_t> pos_;
  std::vector<Record> out_;
};

template <typename T, typename Fn>
Loaded<T> load_path(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_input(path);
  return fn(in);
}

bool parse_positive(std::string_view s, double& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out) &&
         out > 0.0;
}

// Reads a CSV table with a header, calling fn(row, line) for every data row.
template <typename Fn>
void for_each_row(std::istream& in, std::initializer_list<std::string_view> columns,
                  LoadStats& stats, Fn&& fn) {
  CsvReader reader(in);
  CsvRow row;
  if (!reader.next(row)) {
    warn(stats, "table is empty");
    return;
  }
  const CsvHeader header(row);
  std::vector<std::size_t> pos;
  for (auto c : columns) pos.push_back(header.require(c));
  const std::size_t width = *std::max_element(pos.begin(), pos.end()) + 1;
  std::vector<std::string> fields(pos.size());
  while (reader.next(row)) {
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    ++stats.lines;
    if (row.size() < width) {
      ++stats.skipped;
      warn(stats, "line " + std::to_string(reader.line()) + ": too few columns");
      continue;
    }
    for (std::size_t i = 0; i < pos.size(); ++i) fields[i] = std::string(trim(row[pos[i]]));
    if (fn(fields, reader.line())) {
      ++stats.loaded;
    } else {
      ++stats.skipped;
    }
  }
}

const icu::Normalizer2& nfkc_casefold() {
  static const icu::Normalizer2* n = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* p = icu::Normalizer2::getNFKCCasefoldInstance(status);
    if (U_FAILURE(status) || p == nullptr) throw Error("ICU NFKC_Casefold unavailable");
    return p;
  }();
  return *n;
}

}  // namespace

Loaded<std::vector<UserRecord>> load_users(std::istream& in) {
  Loaded<std::vector<UserRecord>> out;
  LastWins<UserRecord> users;
  for_each_object(in, out.stats, [&](const json& obj, std::size_t line) {
    auto id = id_field(obj, "user_id");
    if (!id) {
      ++out.stats.skipped;
      warn(out.stats, "line " + std::to_string(line) + ": missing user_id");
      return;
    }
    UserRecord u;
    u.user_id = *id;
    u.description = string_field(obj, "description");
    if (auto lang = string_field(obj, "lang"); !trim(lang).empty())
      u.raw_lang_hint = std::string(trim(lang));
    users.put(*id, std::move(u), line, out.stats, "user_id");
  });
  out.value = users.take();
  out.stats.loaded = out.value.size();
  return out;
}

Loaded<std::vector<UserRecord>> load_users(const std::filesystem::path& path) {
  return load_path<std::vector<UserRecord>>(path, [](std::istream& in) { return load_users(in); });
}

Loaded<std::vector<TweetRecord>> load_tweets(std::istream& in) {
  Loaded<std::vector<TweetRecord>> out;
  LastWins<TweetRecord> tweets;
  for_each_object(in, out.stats, [&](const json& obj, std::size_t line) {
    const std::string where = "line " + std::to_string(line) + ": ";
    auto tid = id_field(obj, "tweet_id");
    auto uid = id_field(obj, "user_id");
    if (!tid || !uid) {
      ++out.stats.skipped;
      warn(out.stats, where + (tid ? "missing user_id" : "missing tweet_id"));
      return;
    }
    std::string when = string_field(obj, "month");
    if (when.empty()) when = string_field(obj, "created_at");
    const auto ym = YearMonth::parse(trim(when));
    if (!ym) {
      ++out.stats.skipped;
      warn(out.stats, where + "unparseable month '" + when + "'");
      return;
    }
    TweetRecord t;
    t.tweet_id = *tid;
    t.user_id = *uid;
    t.text = string_field(obj, "text");
    t.lang = canonical_language(string_field(obj, "lang"));
    t.month = ym->to_string();
    if (auto it = obj.find("hashtags"); it != obj.end() && it->is_array()) {
      for (const auto& h : *it) {
        std::string tag;
        if (h.is_string()) {
          tag = h.get<std::string>();
        } else if (h.is_object()) {
          tag = string_field(h, "text");
        }
        std::string_view v = trim(tag);
        if (!v.empty() && v.front() == '#') v.remove_prefix(1);
        if (!v.empty()) t.hashtags.emplace_back(v);
      }
    }
    tweets.put(*tid, std::move(t), line, out.stats, "tweet_id");
  });
  out.value = tweets.take();
  out.stats.loaded = out.value.size();
  return out;
}

Loaded<std::vector<TweetRecord>> load_tweets(const std::filesystem::path& path) {
  return load_path<std::vector<TweetRecord>>(path, [](std::istream& in) { return load_tweets(in); });
}

std::map<std::string, std::vector<TweetRecord>> partition_by_month(
    const std::vector<TweetRecord>& tweets) {
  std::map<std::string, std::vector<TweetRecord>> out;
  for (const auto& t : tweets) out[t.month].push_back(t);
  return out;
}

std::string normalize_hashtag(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  const icu::UnicodeString folded = nfkc_casefold().normalize(src, status);
  if (U_FAILURE(status)) return {};
  icu::UnicodeString kept;
  for (int32_t i = 0; i < folded.length();) {
    const UChar32 c = folded.char32At(i);
    const auto mask = U_GET_GC_MASK(c);
    if (u_isalnum(c) || (mask & (U_GC_MN_MASK | U_GC_MC_MASK))) kept.append(c);
    i += U16_LENGTH(c);
  }
  std::string out;
  kept.toUTF8String(out);
  return out;
}

Loaded<DominantLanguageTable> load_dominant_languages(std::istream& in) {
  Loaded<DominantLanguageTable> out;
  for_each_row(in, {"iso2", "langs"}, out.stats, [&](const std::vector<std::string>& f,
                                                     std::size_t line) {
    const std::string where = "line " + std::to_string(line) + ": ";
    if (!is_iso2(f[0])) {
      warn(out.stats, where + "invalid country code '" + f[0] + "'");
      return false;
    }
    std::vector<std::string> langs;
    std::string_view rest = f[1];
    while (true) {
      const auto semi = rest.find(';');
      const auto code = trim(rest.substr(0, semi));
      if (!code.empty()) {
        const std::string lang = canonical_language(code);
        if (lang == kUndefinedLanguage && code != kUndefinedLanguage) {
          warn(out.stats, where + "invalid language code '" + std::string(code) + "'");
          return false;
        }
        if (std::find(langs.begin(), langs.end(), lang) == langs.end()) langs.push_back(lang);
      }
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
    if (langs.empty()) {
      warn(out.stats, where + "no languages for " + f[0]);
      return false;
    }
    if (out.value.contains(f[0])) warn(out.stats, where + "duplicate country " + f[0] + ", last kept");
    out.value[f[0]] = std::move(langs);
    return true;
  });
  return out;
}

Loaded<DominantLanguageTable> load_dominant_languages(const std::filesystem::path& path) {
  return load_path<DominantLanguageTable>(path,
                                          [](std::istream& in) { return load_dominant_languages(in); });
}

Loaded<IndicatorTable> load_indicators(std::istream& in) {
  Loaded<IndicatorTable> out;
  for_each_row(in, {"iso2", "gdp_usd", "population"}, out.stats,
               [&](const std::vector<std::string>& f, std::size_t line) {
                 const std::string where = "line " + std::to_string(line) + ": ";
                 Indicators ind;
                 if (!is_iso2(f[0])) {
                   warn(out.stats, where + "invalid country code '" + f[0] + "'");
                   return false;
                 }
                 if (!parse_positive(f[1], ind.gdp_usd) || !parse_positive(f[2], ind.population)) {
                   warn(out.stats, where + "gdp_usd and population must be positive numbers");
                   return false;
                 }
                 if (out.value.contains(f[0]))
                   warn(out.stats, where + "duplicate country " + f[0] + ", last kept");
                 out.value[f[0]] = ind;
                 return true;
               });
  return out;
}

Loaded<IndicatorTable> load_indicators(const std::filesystem::path& path) {
  return load_path<IndicatorTable>(path, [](std::istream& in) { return load_indicators(in); });
}

Loaded<RegionTable> load_regions(std::istream& in) {
  Loaded<RegionTable> out;
  for_each_row(in, {"iso2", "region"}, out.stats,
               [&](const std::vector<std::string>& f, std::size_t line) {
                 const std::string where = "line " + std::to_string(line) + ": ";
                 if (!is_iso2(f[0]) || f[1].empty()) {
                   warn(out.stats, where + "expected iso2 and a region name");
                   return false;
                 }
                 if (out.value.contains(f[0]))
                   warn(out.stats, where + "duplicate country " + f[0] + ", last kept");
                 out.value[f[0]] = f[1];
                 return true;
               });
  return out;
}

Loaded<RegionTable> load_regions(const std::filesystem::path& path) {
  return load_path<RegionTable>(path, [](std::istream& in) { return load_regions(in); });
}

const RegionTable& builtin_regions() {
  static const RegionTable table = [] {
    std::istringstream in{std::string(builtin_regions_csv())};
    return load_regions(in).value;
  }();
  return table;
}

std::vector<std::string> region_names(const RegionTable& regions) {
  std::set<std::string> names;
  for (const auto& [iso, region] : regions) names.insert(region);
  return {names.begin(), names.end()};
}

HashtagIgnoreList parse_ignore_list(std::string_view text) {
  HashtagIgnoreList out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.size() == 1 || line[1] == ' ' || line[1] == '\t') continue;
      line.remove_prefix(1);
    }
    std::string tag = normalize_hashtag(line);
    if (!tag.empty()) out.insert(std::move(tag));
  }
  return out;
}

HashtagIgnoreList load_ignore_list(const std::filesystem::path& path) {
  return parse_ignore_list(read_file(path));
}

const HashtagIgnoreList& builtin_ignore_list() {
  static const HashtagIgnoreList list = parse_ignore_list(builtin_hashtag_ignore_text());
  return list;
}

}  // namespace cybergeo
