#include <gtest/gtest.h>

#include <cmath>

#include "cybergeo/analytics.hpp"
#include "cybergeo/botscore.hpp"
#include "cybergeo/model.hpp"

using namespace cybergeo;

TEST(Defaults, PublishedConstants) {
  EXPECT_EQ(kDefaultMatchThreshold, 0.80);
  EXPECT_EQ(kDefaultBotThreshold, 0.5);
  EXPECT_EQ(kDefaultTopLanguages, 30u);
  EXPECT_EQ(kDefaultDominantThreshold, 0.8);
  EXPECT_EQ(kDefaultTopHashtags, 5u);
  EXPECT_EQ(kDefaultSeed, 42u);
}

TEST(Defaults, MatchOrder) {
  EXPECT_EQ(kMatchOrder[0], MatchClass::CityCountryPair);
  EXPECT_EQ(kMatchOrder[1], MatchClass::Country);
  EXPECT_EQ(kMatchOrder[2], MatchClass::City);
}

TEST(YearMonth, Parse) {
  EXPECT_EQ(YearMonth::parse("2021-03")->to_string(), "2021-03");
  EXPECT_EQ(YearMonth::parse("2021-12-31T23:59:59Z")->to_string(), "2021-12");
  EXPECT_EQ(YearMonth::parse("2020-02-29")->month, 2);
  EXPECT_FALSE(YearMonth::parse("2021-02-29"));
  EXPECT_FALSE(YearMonth::parse("2021-13"));
  EXPECT_FALSE(YearMonth::parse("2021-3"));
  EXPECT_FALSE(YearMonth::parse("March 2021"));
  EXPECT_LT(*YearMonth::parse("2020-12"), *YearMonth::parse("2021-01"));
}

TEST(MatchClassNames, RoundTrip) {
  for (auto c : kMatchOrder) EXPECT_EQ(parse_match_class(to_string(c)), c);
  EXPECT_FALSE(parse_match_class("town"));
}

TEST(Languages, Canonical) {
  EXPECT_EQ(canonical_language("EN"), "en");
  EXPECT_EQ(canonical_language(" fil "), "fil");
  EXPECT_EQ(canonical_language(""), "und");
  EXPECT_EQ(canonical_language("zh-cn"), "und");
  EXPECT_EQ(canonical_language("english"), "und");
  EXPECT_TRUE(is_valid_language("und"));
  EXPECT_FALSE(is_valid_language("EN"));
}

TEST(BotLabel, InclusiveBoundary) {
  EXPECT_EQ(BotLabel::create("u", 0.5).label(), Label::Bot);
  EXPECT_EQ(BotLabel::create("u", 0.499).label(), Label::Human);
  EXPECT_EQ(BotLabel::create("u", 1.0).label(), Label::Bot);
  EXPECT_EQ(BotLabel::create("u", 0.0).label(), Label::Human);
  EXPECT_EQ(classify(0.5), Label::Bot);
  EXPECT_EQ(classify(std::nextafter(0.5, 0.0)), Label::Human);
  EXPECT_EQ(classify(0.7, 0.8), Label::Human);
}

TEST(BotLabel, RejectsOutOfRange) {
  EXPECT_THROW(BotLabel::create("u", -0.01), std::invalid_argument);
  EXPECT_THROW(BotLabel::create("u", 1.01), std::invalid_argument);
  EXPECT_THROW(BotLabel::create("u", std::nan("")), std::invalid_argument);
  EXPECT_THROW(BotLabel::create("", 0.3), std::invalid_argument);
  EXPECT_THROW(classify(2.0), std::invalid_argument);
}

TEST(Entries, Validation) {
  GazetteerEntry e;
  e.name_normalized = "paris";
  e.country_iso2 = "FR";
  EXPECT_NO_THROW(validate_entry(e));
  e.lat = 91;
  EXPECT_THROW(validate_entry(e), std::invalid_argument);
  e.lat = 0;
  e.aliases = {"paris"};
  EXPECT_THROW(validate_entry(e), std::invalid_argument);
}

TEST(Dataset, ValidationReasons) {
  std::vector<UserRecord> users = {{"u1", "", {}}, {"u1", "", {}}, {"", "", {}}};
  std::vector<TweetRecord> tweets(4);
  tweets[0] = {"t1", "u1", "", "en", "2021-01", {}};
  tweets[1] = {"t2", "ghost", "", "en", "2021-01", {}};
  tweets[2] = {"t3", "u1", "", "EN", "2021-01", {}};
  tweets[3] = {"t4", "u1", "", "en", "2021-01-05", {"ok", ""}};
  const auto r = validate_dataset(users, tweets);
  EXPECT_EQ(r.valid_users, 1u);
  EXPECT_EQ(r.invalid_users, 2u);
  EXPECT_EQ(r.count("duplicate user_id"), 1u);
  EXPECT_EQ(r.count("missing user_id"), 1u);
  EXPECT_EQ(r.valid_tweets, 1u);
  EXPECT_EQ(r.count("orphan tweet"), 1u);
  EXPECT_EQ(r.count("invalid lang"), 1u);
  EXPECT_GE(r.count("unparseable month") + r.count("empty hashtag"), 1u);
}
