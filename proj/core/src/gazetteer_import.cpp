#include <charconv>
#include <set>
#include <string>

#include "cybergeo/csv.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/gazetteer.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool valid_coordinates(double lat, double lon) {
  return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
}

// Normalizes alternative names, dropping empties and duplicates of the
// primary name while keeping first-seen order.
std::vector<std::string> normalize_aliases(const std::string& primary,
                                           const std::vector<std::string_view>& raw) {
  std::vector<std::string> out;
  std::set<std::string> seen{primary};
  for (auto a : raw) {
    std::string n = normalize_name(a);
    if (n.empty() || !seen.insert(n).second) continue;
    out.push_back(std::move(n));
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

void warn(ImportStats& stats, std::size_t line, const std::string& what) {
  constexpr std::size_t kMaxWarnings = 50;
  if (stats.warnings.size() < kMaxWarnings)
    stats.warnings.push_back("line " + std::to_string(line) + ": " + what);
}

}  // namespace

ImportResult import_cities(std::istream& in) {
  ImportResult result;
  auto& stats = result.stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    ++stats.rows;
    const auto cols = split_tabs(line);
    if (cols.size() < 15) {
      ++stats.malformed;
      warn(stats, line_no, "expected at least 15 columns");
      continue;
    }
    const auto lat = parse_double(cols[4]);
    const auto lon = parse_double(cols[5]);
    if (!lat || !lon || !valid_coordinates(*lat, *lon)) {
      ++stats.malformed;
      warn(stats, line_no, "unparseable coordinates");
      continue;
    }
    const std::string iso2(trim(cols[8]));
    if (!is_iso2(iso2)) {
      ++stats.malformed;
      warn(stats, line_no, "invalid country code '" + iso2 + "'");
      continue;
    }
    const auto population = parse_count(cols[14]);
    if (!population) {
      ++stats.malformed;
      warn(stats, line_no, "unparseable population");
      continue;
    }
    if (*population < kMinCityPopulation) {
      ++stats.low_population;
      continue;
    }
    GazetteerEntry e;
    e.kind = PlaceKind::City;
    e.name_normalized = normalize_name(cols[1]);
    if (e.name_normalized.empty()) {
      ++stats.malformed;
      warn(stats, line_no, "empty name");
      continue;
    }
    e.aliases = normalize_aliases(e.name_normalized, split(cols[3], ','));
    e.country_iso2 = iso2;
    e.lat = *lat;
    e.lon = *lon;
    e.population = *population;
    result.entries.push_back(std::move(e));
  }
  stats.imported = result.entries.size();
  if (stats.rows == 0) stats.warnings.push_back("city source is empty");
  return result;
}

ImportResult import_cities(const std::filesystem::path& path) {
  auto in = open_input(path);
  return import_cities(in);
}

ImportResult import_countries(std::istream& in) {
  ImportResult result;
  auto& stats = result.stats;
  CsvReader reader(in);
  CsvRow row;
  if (!reader.next(row)) {
    stats.warnings.push_back("country source is empty");
    return result;
  }
  const CsvHeader header(row);
  const std::size_t c_iso = header.require("iso2");
  const std::size_t c_name = header.require("name");
  const std::size_t c_lat = header.require("lat");
  const std::size_t c_lon = header.require("lon");
  const std::ptrdiff_t c_alias = header.find("aliases");
  const std::size_t needed = std::max({c_iso, c_name, c_lat, c_lon}) + 1;

  std::set<std::string> seen;
  while (reader.next(row)) {
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    ++stats.rows;
    const std::size_t line = reader.line();
    if (row.size() < needed) {
      ++stats.malformed;
      warn(stats, line, "missing columns");
      continue;
    }
    const std::string iso2(trim(row[c_iso]));
    if (!is_iso2(iso2)) {
      ++stats.malformed;
      warn(stats, line, "invalid country code '" + iso2 + "'");
      continue;
    }
    const auto lat = parse_double(row[c_lat]);
    const auto lon = parse_double(row[c_lon]);
    if (!lat || !lon || !valid_coordinates(*lat, *lon)) {
      ++stats.malformed;
      warn(stats, line, "unparseable coordinates");
      continue;
    }
    GazetteerEntry e;
    e.kind = PlaceKind::Country;
    e.name_normalized = normalize_name(row[c_name]);
    if (e.name_normalized.empty()) {
      ++stats.malformed;
      warn(stats, line, "empty name");
      continue;
    }
    if (!seen.insert(iso2).second) {
      ++stats.duplicates;
      warn(stats, line, "duplicate country code '" + iso2 + "', keeping the first");
      continue;
    }
    if (c_alias >= 0 && static_cast<std::size_t>(c_alias) < row.size())
      e.aliases = normalize_aliases(e.name_normalized, split(row[static_cast<std::size_t>(c_alias)], ';'));
    e.country_iso2 = iso2;
    e.lat = *lat;
    e.lon = *lon;
    result.entries.push_back(std::move(e));
  }
  stats.imported = result.entries.size();
  return result;
}

ImportResult import_countries(const std::filesystem::path& path) {
  auto in = open_input(path);
  return import_countries(in);
}

}  // namespace cybergeo
