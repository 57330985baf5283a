#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "cybergeo/errors.hpp"
#include "cybergeo/gazetteer.hpp"
#include "cybergeo/text.hpp"
#include "generators.hpp"

using namespace cybergeo;

namespace {

const std::filesystem::path kFixtures = CYBERGEO_FIXTURE_DIR;

std::string geonames_row(const std::string& name, const std::string& alt, const std::string& lat,
                         const std::string& lon, const std::string& cc, const std::string& pop) {
  return "1\t" + name + "\t" + name + "\t" + alt + "\t" + lat + "\t" + lon + "\tP\tPPL\t" + cc +
         "\t\t\t\t\t\t" + pop + "\t\t0\tUTC\t2024-01-01\n";
}

GazetteerIndex fixture_index() {
  auto cities = import_cities(kFixtures / "cities.tsv");
  auto countries = import_countries(kFixtures / "countries.csv");
  auto entries = cities.entries;
  entries.insert(entries.end(), countries.entries.begin(), countries.entries.end());
  return GazetteerIndex::build(entries);
}

GazetteerEntry city(std::string name, std::string iso, std::uint64_t pop,
                    std::vector<std::string> aliases = {}) {
  GazetteerEntry e;
  e.name_normalized = std::move(name);
  e.country_iso2 = std::move(iso);
  e.population = pop;
  e.aliases = std::move(aliases);
  return e;
}

GazetteerEntry country(std::string name, std::string iso) {
  GazetteerEntry e = city(std::move(name), std::move(iso), 0);
  e.kind = PlaceKind::Country;
  return e;
}

}  // namespace

TEST(ImportCities, FixtureHasTenRowsAndAliases) {
  const auto r = import_cities(kFixtures / "cities.tsv");
  ASSERT_EQ(r.entries.size(), 10u);
  EXPECT_EQ(r.stats.rows, 10u);
  EXPECT_EQ(r.stats.malformed, 0u);
  const auto& moscow = r.entries[3];
  EXPECT_EQ(moscow.name_normalized, "moscow");
  EXPECT_EQ(moscow.country_iso2, "RU");
  EXPECT_EQ(moscow.aliases, (std::vector<std::string>{"moskva", "москва"}));
  EXPECT_EQ(r.entries[6].aliases, (std::vector<std::string>{"new york", "nyc"}));
}

TEST(ImportCities, SkipsBadRowsAndCountsThem) {
  std::stringstream in;
  in << geonames_row("Good", "", "10.5", "20.25", "FR", "5000")
     << geonames_row("Tiny", "", "10", "20", "FR", "999")
     << geonames_row("BadLat", "", "x", "20", "FR", "5000")
     << geonames_row("OffGlobe", "", "95", "20", "FR", "5000")
     << geonames_row("BadCc", "", "1", "2", "fra", "5000")
     << "only\tthree\tcolumns\n"
     << "\n";
  const auto r = import_cities(in);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].name_normalized, "good");
  EXPECT_DOUBLE_EQ(r.entries[0].lat, 10.5);
  EXPECT_EQ(r.stats.rows, 6u);
  EXPECT_EQ(r.stats.low_population, 1u);
  EXPECT_EQ(r.stats.malformed, 4u);
  EXPECT_EQ(r.stats.warnings.size(), 4u);
}

TEST(ImportCities, AliasesAreNormalizedAndDeduplicated) {
  std::stringstream in;
  in << geonames_row("Zürich", "Zurich,ZÜRICH,Zurigo,,Zurigo", "47.37", "8.55", "CH", "400000");
  const auto r = import_cities(in);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].name_normalized, "zurich");
  EXPECT_EQ(r.entries[0].aliases, (std::vector<std::string>{"zurigo"}));
}

TEST(ImportCities, EmptySourceWarns) {
  std::stringstream in;
  const auto r = import_cities(in);
  EXPECT_TRUE(r.entries.empty());
  ASSERT_EQ(r.stats.warnings.size(), 1u);
}

TEST(ImportCountries, AliasesColumnIsOptional) {
  std::stringstream with("iso2,name,lat,lon,aliases\nUS,United States,39.7,-98.5,USA;America\n");
  const auto a = import_countries(with);
  ASSERT_EQ(a.entries.size(), 1u);
  EXPECT_EQ(a.entries[0].kind, PlaceKind::Country);
  EXPECT_EQ(a.entries[0].aliases, (std::vector<std::string>{"usa", "america"}));

  std::stringstream without("iso2,name,lat,lon\nFR,France,46,2\nFR,France again,1,1\n");
  const auto b = import_countries(without);
  ASSERT_EQ(b.entries.size(), 1u);
  EXPECT_EQ(b.stats.duplicates, 1u);
}

TEST(ImportCountries, MissingColumnIsInputError) {
  std::stringstream in("iso2,name,lat\nFR,France,46\n");
  EXPECT_THROW(import_countries(in), InputError);
}

TEST(Index, KeyCountsPerClass) {
  const auto index = fixture_index();
  EXPECT_EQ(index.city_count(), 10u);
  EXPECT_EQ(index.country_count(), 3u);
  EXPECT_EQ(index.alias_count(), 7u);
  EXPECT_EQ(index.key_count(MatchClass::City), 14u);
  EXPECT_EQ(index.key_count(MatchClass::Country), 6u);
  // every city name paired with every name of its country
  EXPECT_EQ(index.key_count(MatchClass::CityCountryPair), 3u * 1 + 3u * 2 + 4u * 3);
}

TEST(Index, EmptyOrInvalidEntriesRejected) {
  EXPECT_THROW(GazetteerIndex::build({}), std::invalid_argument);
  EXPECT_THROW(GazetteerIndex::build({city("Not Normalized", "FR", 5000)}), std::invalid_argument);
  EXPECT_THROW(GazetteerIndex::build({city("paris", "fr", 5000)}), std::invalid_argument);
}

TEST(Index, BestMatchStrictlyAboveThreshold) {
  const auto index = GazetteerIndex::build({city("abcdf", "FR", 5000)});
  const auto q = PreparedQuery::from_utf8("abcde");
  EXPECT_FALSE(index.best_match(MatchClass::City, q, 0.8));
  const auto m = index.best_match(MatchClass::City, q, 0.79);
  ASSERT_TRUE(m);
  EXPECT_EQ(m->similarity, 0.8);
  EXPECT_EQ(m->lcs, 4u);
}

TEST(Index, TiesPreferLargerPopulation) {
  const auto index = GazetteerIndex::build({city("springfield", "US", 60000), city("springfield", "US", 160000),
                                            city("springfielc", "CA", 900000)});
  const auto m = index.best_match(MatchClass::City, PreparedQuery::from_utf8("springfield"));
  ASSERT_TRUE(m);
  EXPECT_EQ(index.entries()[m->entry].population, 160000u);
}

TEST(Index, TiesThenPreferSmallerKeyText) {
  // "abcx" and "abcy" score the same against "abc"; equal population
  const auto index = GazetteerIndex::build({city("abcy", "US", 5000), city("abcx", "US", 5000)});
  const auto m = index.best_match(MatchClass::City, PreparedQuery::from_utf8("abc"), 0.5);
  ASSERT_TRUE(m);
  EXPECT_EQ(index.key_text(MatchClass::City, m->key), "abcx");
}

TEST(Index, AliasKeysResolveToTheirEntry) {
  const auto index = fixture_index();
  const auto m = index.best_match(MatchClass::City, PreparedQuery::from_utf8("москва"));
  ASSERT_TRUE(m);
  EXPECT_EQ(index.entries()[m->entry].name_normalized, "moscow");
  EXPECT_EQ(m->similarity, 1.0);
}

TEST(Index, PairKeysUseCountryAliases) {
  const auto index = fixture_index();
  const auto m = index.best_match(MatchClass::CityCountryPair, PreparedQuery::from_utf8("chicago, usa"));
  ASSERT_TRUE(m);
  EXPECT_EQ(index.key_text(MatchClass::CityCountryPair, m->key), "chicago, usa");
}

TEST(Index, PrunedEqualsFullScanOnFixture) {
  const auto index = fixture_index();
  for (const char* q : {"pariss", "moskow", "new yrok", "houstn", "frnce", "kazan, rusia", "xyz", "l"}) {
    const auto p = PreparedQuery::from_utf8(q);
    for (auto cls : kMatchOrder)
      EXPECT_EQ(index.best_match(cls, p), index.best_match_full_scan(cls, p)) << q;
  }
}

TEST(Index, CandidateKeysContainEveryQualifyingKey) {
  Rng rng(11);
  const auto index = GazetteerIndex::build(gen::gazetteer(rng, 3000, 50));
  for (int i = 0; i < 200; ++i) {
    const auto p = PreparedQuery::from_utf8(gen::near_query(rng, index.entries()));
    const auto cand = index.candidate_keys(MatchClass::City, p);
    const std::set<std::uint32_t> kept(cand.begin(), cand.end());
    for (std::uint32_t k = 0; k < index.key_count(MatchClass::City); ++k) {
      const double s = similarity(p.text(), utf8_to_u32(index.key_text(MatchClass::City, k)));
      if (s > kDefaultMatchThreshold) ASSERT_TRUE(kept.contains(k));
    }
  }
}

TEST(Index, VisitsOnlyReachableLengthBands) {
  Rng rng(5);
  const auto index = GazetteerIndex::build(gen::gazetteer(rng, 5000, 50));
  const auto p = PreparedQuery::from_utf8("kalomi");
  EXPECT_LT(index.buckets_visited(MatchClass::City, p), index.bucket_count(MatchClass::City));
  EXPECT_GT(index.buckets_visited(MatchClass::City, p), 0u);
}

TEST(Index, SerializeRoundTrip) {
  const auto index = fixture_index();
  const auto bytes = index.serialize();
  const auto back = GazetteerIndex::deserialize(bytes);
  EXPECT_EQ(back.entries(), index.entries());
  EXPECT_EQ(back.serialize(), bytes);
  const auto p = PreparedQuery::from_utf8("chicagoo");
  EXPECT_EQ(back.best_match(MatchClass::City, p), index.best_match(MatchClass::City, p));
}

TEST(Index, CorruptFilesRejected) {
  const auto bytes = fixture_index().serialize();
  EXPECT_THROW(GazetteerIndex::deserialize(""), InputError);
  EXPECT_THROW(GazetteerIndex::deserialize("not an index at all"), InputError);
  EXPECT_THROW(GazetteerIndex::deserialize(bytes.substr(0, bytes.size() / 2)), InputError);
  EXPECT_THROW(GazetteerIndex::deserialize(bytes + "x"), InputError);
  auto wrong_version = bytes;
  wrong_version[8] = 99;
  EXPECT_THROW(GazetteerIndex::deserialize(wrong_version), InputError);
  EXPECT_THROW(GazetteerIndex::load("/nonexistent/index.bin"), InputError);
}

TEST(Signature, BoundsLcs) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    // long runs over few codepoints saturate the counts
    const auto a = rng.below(2) ? gen::u32_string(rng, 40) : std::u32string(20 + rng.below(40), U'a' + rng.below(3));
    const auto b = gen::mutate(rng, a, rng.below(8));
    EXPECT_GE(signature_bound(char_signature(a), char_signature(b)) + signature_excess(a), lcs_length(a, b));
  }
}
