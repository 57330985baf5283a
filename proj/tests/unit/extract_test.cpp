#include <gtest/gtest.h>

#include <algorithm>

#include "cybergeo/geolocate.hpp"

using namespace cybergeo;

namespace {

std::vector<std::string> texts(const std::vector<CandidateSpan>& spans) {
  std::vector<std::string> out;
  for (const auto& s : spans) out.push_back(s.text);
  return out;
}

bool has(const std::vector<CandidateSpan>& spans, const std::string& text) {
  return std::any_of(spans.begin(), spans.end(), [&](const auto& s) { return s.text == text; });
}

}  // namespace

TEST(StripNoise, UrlsMentionsAndEmojiBecomeBreaks) {
  const auto s = strip_noise("Paris 🇫🇷 https://x.co/a @bob www.site.org London");
  EXPECT_EQ(s.find("http"), std::string::npos);
  EXPECT_EQ(s.find("bob"), std::string::npos);
  EXPECT_EQ(s.find("site"), std::string::npos);
  EXPECT_NE(s.find("Paris"), std::string::npos);
  EXPECT_NE(s.find("London"), std::string::npos);
}

TEST(Extract, CityCountryPair) {
  const auto c = extract_candidates("Paris, France");
  EXPECT_TRUE(has(c, "Paris"));
  EXPECT_TRUE(has(c, "France"));
  EXPECT_TRUE(has(c, "Paris, France"));
}

TEST(Extract, SentenceCaseWordIsNotAName) {
  const auto c = extract_candidates("Coffee lover. Living in Paris");
  EXPECT_FALSE(has(c, "Coffee"));
  EXPECT_FALSE(has(c, "Living"));
  EXPECT_TRUE(has(c, "Paris"));
}

TEST(Extract, LeadingArticleKeptInsideNames) {
  const auto c = extract_candidates("Los Angeles, USA");
  EXPECT_TRUE(has(c, "Los Angeles"));
  EXPECT_TRUE(has(c, "Los Angeles, USA"));
  // the stripped form is kept too
  EXPECT_TRUE(has(c, "Angeles, USA"));
}

TEST(Extract, InnerNGramsOfCapitalizedRuns) {
  const auto c = extract_candidates("Proud Texan From Houston Texas");
  EXPECT_FALSE(has(c, "Proud Texan From Houston Texas"));  // too long
  EXPECT_TRUE(has(c, "Houston"));
  EXPECT_TRUE(has(c, "Houston Texas"));
  EXPECT_TRUE(has(c, "Texan From Houston"));
  EXPECT_FALSE(has(c, "From Houston"));
}

TEST(Extract, RunsLongerThanThreeOnlyGiveNGrams) {
  const auto c = extract_candidates("Big Apple Pie Company Mountain");
  EXPECT_FALSE(has(c, "Big Apple Pie Company Mountain"));
  EXPECT_TRUE(has(c, "Pie Company Mountain"));
  EXPECT_TRUE(has(c, "Mountain"));
}

TEST(Extract, LowercaseFallbackOnlyWithoutCapitals) {
  const auto lower = extract_candidates("living in san francisco, ca");
  EXPECT_TRUE(has(lower, "san francisco"));
  EXPECT_TRUE(has(lower, "francisco"));
  const auto mixed = extract_candidates("living in san francisco. Go Giants");
  EXPECT_FALSE(has(mixed, "francisco"));
}

TEST(Extract, CommaSegmentsOfUpToThreeTokens) {
  const auto c = extract_candidates("nurse, mother, new york city");
  EXPECT_TRUE(has(c, "new york city"));
  EXPECT_TRUE(has(c, "nurse, mother"));
}

TEST(Extract, DeduplicatedOnNormalizedForm) {
  const auto c = extract_candidates("PARIS | Paris | paris");
  const auto t = texts(c);
  EXPECT_EQ(std::count_if(t.begin(), t.end(), [](const std::string& s) { return s == "PARIS" || s == "Paris"; }), 1);
}

TEST(Extract, AbbreviationsWithDotsSurvive) {
  const auto c = extract_candidates("Proud to live in the U.S.A.");
  EXPECT_TRUE(has(c, "U.S.A"));
}

TEST(Extract, NonLatinScripts) {
  EXPECT_TRUE(has(extract_candidates("Москва, Россия"), "Москва"));
  EXPECT_TRUE(has(extract_candidates("東京"), "東京"));
}

TEST(Extract, EmptyAndNoiseOnly) {
  EXPECT_TRUE(extract_candidates("").empty());
  EXPECT_TRUE(extract_candidates("   https://a.b @c 😀 ").empty());
}

TEST(Extract, CustomStopwords) {
  const auto sw = Stopwords::parse("# comment\nAPPLE\n\nbanana\n");
  EXPECT_EQ(sw.size(), 2u);
  EXPECT_TRUE(sw.contains("apple"));
  const auto c = extract_candidates("apple kazan", sw);
  EXPECT_TRUE(has(c, "kazan"));
  EXPECT_FALSE(has(c, "apple"));
}

TEST(Entities, SpansAndAdjacentPairs) {
  const auto c = candidates_from_entities({"Paris", " ", "France", "Europe"});
  EXPECT_EQ(texts(c), (std::vector<std::string>{"Paris", "France", "Europe", "Paris, France", "France, Europe"}));
  EXPECT_EQ(c[0].source, CandidateSource::EntityExtractor);
  EXPECT_EQ(c[3].source, CandidateSource::PairSynthesis);
}
