#include "reports.hpp"

#include <nlohmann/json.hpp>

#include "cybergeo/csv.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/format.hpp"

namespace cybergeo::cli {
namespace {

std::string count(std::size_t n) { return std::to_string(n); }
std::string flag(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string country_csv(const std::vector<CountryMetrics>& rows) {
  CsvWriter w;
  w.row({"iso2", "month", "n_months", "n_users", "n_bots", "bot_rate", "bot_share", "share_defined"});
  for (const auto& m : rows)
    w.row({m.country_iso2, m.month, count(m.n_months), count(m.n_users), count(m.n_bots),
           format_real(m.bot_rate), format_real(m.bot_share), flag(m.share_defined)});
  return w.str();
}

std::string language_csv(const std::vector<LanguageMetrics>& ranked) {
  CsvWriter w;
  w.row({"rank", "lang", "month", "n_months", "n_users", "n_bots", "bot_rate"});
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& m = ranked[i];
    w.row({count(i + 1), m.lang, m.month, count(m.n_months), count(m.n_users), count(m.n_bots),
           format_real(m.bot_rate)});
  }
  return w.str();
}

std::string dominant_csv(const std::vector<DominantLanguageMetrics>& rows) {
  CsvWriter w;
  w.row({"iso2", "month", "n_months", "n_bots", "n_dominant", "fraction"});
  for (const auto& m : rows)
    w.row({m.country_iso2, m.month, count(m.n_months), count(m.n_bots), count(m.n_dominant),
           format_real(m.fraction)});
  return w.str();
}

std::string breakdown_csv(const std::vector<LanguageBreakdown>& rows) {
  CsvWriter w;
  w.row({"iso2", "fraction", "rank", "lang", "n_tweets"});
  for (const auto& b : rows)
    for (std::size_t i = 0; i < b.languages.size(); ++i)
      w.row({b.country_iso2, format_real(b.fraction), count(i + 1), b.languages[i].lang,
             count(b.languages[i].n_tweets)});
  return w.str();
}

std::string regression_csv(const std::vector<IndicatorRegression>& rows) {
  CsvWriter w;
  w.row({"indicator", "metric", "n", "slope", "intercept", "r_squared", "degenerate", "note"});
  for (const auto& r : rows) {
    if (r.result) {
      const auto& x = *r.result;
      w.row({r.indicator, r.metric, count(x.n), format_real(x.slope), format_real(x.intercept),
             format_real(x.r_squared), flag(x.degenerate), r.note});
    } else {
      w.row({r.indicator, r.metric, "", "", "", "", "true", r.note});
    }
  }
  return w.str();
}

std::string hashtags_csv(const std::vector<RegionHashtagResult>& rows) {
  CsvWriter w;
  w.row({"region", "rank", "hashtag", "count"});
  for (const auto& r : rows) {
    if (r.top.empty()) w.row({r.region, "", "", ""});
    for (std::size_t i = 0; i < r.top.size(); ++i)
      w.row({r.region, count(i + 1), r.top[i].tag, count(r.top[i].count)});
  }
  return w.str();
}

std::string choropleth_csv(const std::vector<ChoroplethValue>& values) {
  CsvWriter w;
  w.row({"iso2", "value"});
  for (const auto& v : values) w.row({v.iso2, format_real(v.value)});
  return w.str();
}

std::string choropleth_geojson(const std::vector<ChoroplethValue>& values,
                               const GazetteerIndex* index) {
  std::map<std::string, const GazetteerEntry*> countries;
  if (index)
    for (const auto& e : index->entries())
      if (e.kind == PlaceKind::Country) countries.emplace(e.country_iso2, &e);

  using nlohmann::ordered_json;
  ordered_json features = ordered_json::array();
  for (const auto& v : values) {
    ordered_json f;
    f["type"] = "Feature";
    f["id"] = v.iso2;
    if (auto it = countries.find(v.iso2); it != countries.end()) {
      // GeoJSON positions are [lon, lat]
      f["geometry"] = {{"type", "Point"}, {"coordinates", {it->second->lon, it->second->lat}}};
    } else {
      f["geometry"] = nullptr;
    }
    f["properties"] = {{"iso2", v.iso2}, {"value", v.value}};
    features.push_back(std::move(f));
  }
  ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

void write_files(const std::filesystem::path& dir, const FileSet& files) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const auto& [name, content] : files) write_file_atomic(dir / name, content);
}

}  // namespace cybergeo::cli
