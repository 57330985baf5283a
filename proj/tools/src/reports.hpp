#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cybergeo/analytics.hpp"
#include "cybergeo/gazetteer.hpp"

namespace cybergeo::cli {

// Output file name -> content. Everything is rendered before anything is
// written.
using FileSet = std::map<std::string, std::string>;

std::string country_csv(const std::vector<CountryMetrics>& rows);
// Rows are written in the given order with a 1-based rank.
std::string language_csv(const std::vector<LanguageMetrics>& ranked);
std::string dominant_csv(const std::vector<DominantLanguageMetrics>& rows);
std::string breakdown_csv(const std::vector<LanguageBreakdown>& rows);
std::string regression_csv(const std::vector<IndicatorRegression>& rows);
std::string hashtags_csv(const std::vector<RegionHashtagResult>& rows);

struct ChoroplethValue {
  std::string iso2;
  double value = 0.0;
};

std::string choropleth_csv(const std::vector<ChoroplethValue>& values);
// FeatureCollection with one feature per country. Geometry is the
// country's gazetteer point when an index is given, else null.
std::string choropleth_geojson(const std::vector<ChoroplethValue>& values,
                               const GazetteerIndex* index);

// Creates `dir` and writes each file atomically.
void write_files(const std::filesystem::path& dir, const FileSet& files);

}  // namespace cybergeo::cli
