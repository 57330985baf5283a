#include "cybergeo/geolocate.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <sstream>

#include "cybergeo/csv.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/format.hpp"
#include "cybergeo/parallel.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

double parse_double(const std::string& s, std::size_t line, std::string_view what) {
  double v = 0.0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw InputError("line " + std::to_string(line) + ": bad " + std::string(what) + " '" + s +
                     "'");
  return v;
}

std::string memo_key(const UserRecord& user, const GeolocateOptions& options) {
  if (!options.entities) return "d\x1f" + description_key(user.description);
  std::string key = "e";
  if (auto it = options.entities->find(user.user_id); it != options.entities->end()) {
    for (const auto& s : it->second) {
      key.push_back('\x1f');
      key += s;
    }
  }
  return key;
}

}  // namespace

EntityMap load_entity_file(std::istream& in) {
  EntityMap map;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    const std::string id(trim(std::string_view(line).substr(0, tab)));
    if (id.empty()) continue;
    auto& spans = map[id];
    spans.clear();
    if (tab == std::string::npos) continue;
    std::string_view rest = std::string_view(line).substr(tab + 1);
    while (!rest.empty()) {
      const auto bar = rest.find('|');
      const auto span = trim(rest.substr(0, bar));
      if (!span.empty()) spans.emplace_back(span);
      if (bar == std::string_view::npos) break;
      rest.remove_prefix(bar + 1);
    }
  }
  return map;
}

EntityMap load_entity_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_entity_file(in);
}

std::optional<GeoMatch> match_location(const std::vector<CandidateSpan>& candidates,
                                       const GazetteerIndex& index, double threshold,
                                       MatchTrace* trace) {
  std::vector<PreparedQuery> queries;
  queries.reserve(candidates.size());
  for (const auto& c : candidates) {
    std::string norm = normalize_name(c.text);
    if (!norm.empty()) queries.push_back(PreparedQuery::from_utf8(norm));
  }
  if (queries.empty()) return std::nullopt;

  for (const MatchClass cls : kMatchOrder) {
    if (trace) trace->consulted.push_back(cls);
    std::optional<KeyMatch> best;
    for (const auto& q : queries) {
      auto m = index.best_match(cls, q, threshold, best ? best->similarity : 0.0);
      if (m && (!best || index.ranks_before(cls, *m, *best))) best = m;
    }
    if (!best) continue;
    const GazetteerEntry& e = index.entries()[best->entry];
    return GeoMatch::create(e.country_iso2, e.lat, e.lon, best->similarity, cls,
                            index.key_text(cls, best->key), threshold);
  }
  return std::nullopt;
}

std::string description_key(std::string_view description) {
  return collapse_whitespace(description);
}

Geolocator::Geolocator(const GazetteerIndex& index, GeolocateOptions options)
    : index_(index), options_(options) {}

std::string Geolocator::cache_key(const UserRecord& user) const {
  return memo_key(user, options_);
}

std::vector<CandidateSpan> Geolocator::candidates(const UserRecord& user) const {
  if (options_.entities) {
    auto it = options_.entities->find(user.user_id);
    if (it == options_.entities->end()) return {};
    return candidates_from_entities(it->second);
  }
  const Stopwords& stop = options_.stopwords ? *options_.stopwords : Stopwords::builtin();
  return extract_candidates(user.description, stop);
}

std::optional<GeoMatch> Geolocator::locate(const UserRecord& user) const {
  const std::string key = cache_key(user);
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto result = match_location(candidates(user), index_, options_.threshold);
  std::unique_lock lock(mutex_);
  cache_.emplace(key, result);
  return result;
}

std::size_t Geolocator::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

std::vector<std::optional<GeoMatch>> geolocate_users(const std::vector<UserRecord>& users,
                                                     const GazetteerIndex& index,
                                                     const GeolocateOptions& options,
                                                     std::size_t threads) {
  const Geolocator locator(index, options);
  // One representative user per distinct key, in first-seen order.
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::size_t> representative;
  std::vector<std::size_t> user_slot(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    auto [it, inserted] = slot.try_emplace(memo_key(users[i], options), representative.size());
    if (inserted) representative.push_back(i);
    user_slot[i] = it->second;
  }

  std::vector<std::optional<GeoMatch>> resolved(representative.size());
  parallel_for(representative.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      const UserRecord& u = users[representative[k]];
      resolved[k] = match_location(locator.candidates(u), index, options.threshold);
    }
  });

  std::vector<std::optional<GeoMatch>> out;
  out.reserve(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) out.push_back(resolved[user_slot[i]]);
  return out;
}

std::string format_geolocations(const std::vector<UserRecord>& users,
                                const std::vector<std::optional<GeoMatch>>& matches) {
  if (users.size() != matches.size())
    throw std::invalid_argument("users and matches differ in length");
  CsvWriter w;
  w.row({"user_id", "country_iso2", "lat", "lon", "similarity", "match_class"});
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!matches[i]) continue;
    const auto& m = *matches[i];
    w.row({users[i].user_id, m.country_iso2(), format_exact(m.lat()), format_exact(m.lon()),
           format_exact(m.similarity()), std::string(to_string(m.match_class()))});
  }
  return w.str();
}

std::vector<GeoRow> read_geolocations(std::istream& in) {
  CsvReader reader(in);
  CsvRow row;
  if (!reader.next(row)) throw InputError("geolocation file is empty");
  const CsvHeader h(row);
  const auto c_user = h.require("user_id");
  const auto c_iso = h.require("country_iso2");
  const auto c_lat = h.require("lat");
  const auto c_lon = h.require("lon");
  const auto c_sim = h.require("similarity");
  const auto c_cls = h.require("match_class");
  const std::size_t width = std::max({c_user, c_iso, c_lat, c_lon, c_sim, c_cls}) + 1;

  std::vector<GeoRow> out;
  while (reader.next(row)) {
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    const auto line = reader.line();
    if (row.size() < width)
      throw InputError("line " + std::to_string(line) + ": expected " + std::to_string(width) +
                       " columns");
    GeoRow g;
    g.user_id = std::string(trim(row[c_user]));
    g.country_iso2 = std::string(trim(row[c_iso]));
    if (g.user_id.empty()) throw InputError("line " + std::to_string(line) + ": empty user_id");
    if (!is_iso2(g.country_iso2))
      throw InputError("line " + std::to_string(line) + ": invalid country code '" +
                       g.country_iso2 + "'");
    g.lat = parse_double(row[c_lat], line, "lat");
    g.lon = parse_double(row[c_lon], line, "lon");
    g.similarity = parse_double(row[c_sim], line, "similarity");
    const auto cls = parse_match_class(trim(row[c_cls]));
    if (!cls) throw InputError("line " + std::to_string(line) + ": bad match_class");
    g.match_class = *cls;
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GeoRow> read_geolocations(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_geolocations(in);
}

}  // namespace cybergeo
