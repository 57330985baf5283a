#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cybergeo/botscore.hpp"
#include "cybergeo/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cybergeo;

namespace {

std::vector<Label> labels_of(const std::vector<LabeledExample>& data) {
  std::vector<Label> out;
  for (const auto& d : data) out.push_back(d.label);
  return out;
}

ForestConfig small_forest() { return {25, 16, 0}; }

}  // namespace

TEST(Tokenize, WordsUrlsMentions) {
  EXPECT_EQ(tokenize_multilingual("Hello, WORLD! visit https://x.io/a?b @Bob_1 now"),
            (std::vector<std::string>{"hello", "world", "visit", "<url>", "<user>", "now"}));
  EXPECT_EQ(tokenize_multilingual("Привет мир"), (std::vector<std::string>{"привет", "мир"}));
  EXPECT_EQ(tokenize_multilingual("café"), (std::vector<std::string>{"café"}));
}

TEST(Tokenize, UnspacedScriptsGiveCharacterNGrams) {
  EXPECT_EQ(tokenize_multilingual("東京都"),
            (std::vector<std::string>{"東", "京", "都", "東京", "京都", "東京都"}));
  EXPECT_EQ(tokenize_multilingual("ok 無料"), (std::vector<std::string>{"ok", "無", "料", "無料"}));
}

TEST(Tfidf, SmoothedIdf) {
  const auto v = TfidfVectorizer::fit({{"a", "b"}, {"a"}});
  EXPECT_EQ(v.vocabulary(), (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(v.idf()[0], 1.0);
  EXPECT_NEAR(v.idf()[1], 1.4054651081081644, 1e-15);
  EXPECT_EQ(v.term_index("b"), 1);
  EXPECT_EQ(v.term_index("zzz"), -1);
}

TEST(Tfidf, TransformIsL2Normalized) {
  const auto v = TfidfVectorizer::fit({{"a", "b"}, {"a"}});
  const auto row = v.transform({"a", "a", "b", "oov"});
  ASSERT_EQ(row.size(), 2u);
  const double a = 2 * 1.0, b = 1.4054651081081644;
  const double norm = std::sqrt(a * a + b * b);
  EXPECT_NEAR(row.at(0), a / norm, 1e-12);
  EXPECT_NEAR(row.at(1), b / norm, 1e-12);
  EXPECT_EQ(v.transform({"oov"}).size(), 0u);
}

TEST(Tfidf, EmptyCorpusRejected) {
  EXPECT_THROW(TfidfVectorizer::fit({}), std::invalid_argument);
  EXPECT_THROW(TfidfVectorizer::fit({{}, {}}), std::invalid_argument);
}

TEST(Forest, LearnsSeparableData) {
  Rng rng(1);
  const auto data = gen::separable_corpus(rng, 400);
  const auto model = BaselineModel::train(data, 42, small_forest());
  std::size_t correct = 0;
  for (const auto& d : data) correct += classify(model.text_probability(d.text)) == d.label;
  EXPECT_GT(static_cast<double>(correct) / static_cast<double>(data.size()), 0.95);
  EXPECT_EQ(model.forest().tree_count(), 25u);
}

TEST(Forest, DeterministicGivenSeed) {
  Rng rng(2);
  const auto data = gen::separable_corpus(rng, 200);
  const auto a = BaselineModel::train(data, 7, small_forest());
  const auto b = BaselineModel::train(data, 7, small_forest());
  const auto c = BaselineModel::train(data, 8, small_forest());
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), c.hash());
}

TEST(Forest, SingleClassRejected) {
  std::vector<LabeledExample> data = {{"a b", Label::Bot, "en"}, {"c d", Label::Bot, "en"}};
  EXPECT_THROW(BaselineModel::train(data, 1), std::invalid_argument);
  EXPECT_THROW(BaselineModel::train({}, 1), std::invalid_argument);
}

TEST(Forest, DepthLimitRespected) {
  Rng rng(3);
  const auto data = gen::separable_corpus(rng, 200);
  const auto model = BaselineModel::train(data, 1, {5, 2, 0});
  for (const auto& tree : model.forest().trees()) {
    // preorder layout: a depth-2 tree has at most 7 nodes
    EXPECT_LE(tree.size(), 7u);
  }
}

TEST(Model, SerializeRoundTrip) {
  Rng rng(4);
  const auto data = gen::separable_corpus(rng, 120);
  const auto model = BaselineModel::train(data, 9, {10, 8, 0});
  const auto bytes = model.serialize();
  const auto back = BaselineModel::deserialize(bytes);
  EXPECT_EQ(back.serialize(), bytes);
  EXPECT_EQ(back.hash(), model.hash());
  EXPECT_EQ(back.config(), model.config());
  for (const auto& d : data) EXPECT_EQ(back.text_probability(d.text), model.text_probability(d.text));
  EXPECT_THROW(BaselineModel::deserialize(bytes.substr(0, 40)), InputError);
  EXPECT_THROW(BaselineModel::deserialize("CGBOTMDX" + bytes.substr(8)), InputError);
  EXPECT_THROW(BaselineModel::deserialize(bytes + "!"), InputError);
}

TEST(Model, PredictAveragesTexts) {
  Rng rng(5);
  const auto data = gen::separable_corpus(rng, 120);
  const auto model = BaselineModel::train(data, 9, {10, 8, 0});
  const double p1 = model.text_probability(data[0].text);
  const double p2 = model.text_probability(data[1].text);
  EXPECT_DOUBLE_EQ(model.predict_probability({data[0].text, data[1].text}), (p1 + p2) / 2);
  EXPECT_THROW(model.predict_probability({}), std::invalid_argument);
}

TEST(F1, MatchesBruteForce) {
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    std::vector<Label> t, p;
    const std::size_t n = 1 + rng.below(30);
    for (std::size_t k = 0; k < n; ++k) {
      t.push_back(rng.below(2) ? Label::Bot : Label::Human);
      p.push_back(rng.below(2) ? Label::Bot : Label::Human);
    }
    ASSERT_NEAR(f1_score(t, p), oracle::f1(t, p), 1e-12);
  }
  EXPECT_THROW(f1_score({Label::Bot}, {}), std::invalid_argument);
}

TEST(Split, StratifiedProportions) {
  std::vector<Label> labels(100, Label::Human);
  for (std::size_t i = 0; i < 30; ++i) labels[i * 3] = Label::Bot;
  const auto s = stratified_split(labels, 0.8, 42);
  EXPECT_EQ(s.train.size(), 80u);
  EXPECT_EQ(s.test.size(), 20u);
  std::size_t bots = 0;
  for (auto i : s.test) bots += labels[i] == Label::Bot;
  EXPECT_EQ(bots, 6u);
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  EXPECT_THROW(stratified_split({Label::Bot, Label::Human, Label::Human}, 0.8, 1), std::invalid_argument);
  EXPECT_THROW(stratified_split(labels, 1.0, 1), std::invalid_argument);
}

TEST(Folds, BalancedAndDeterministic) {
  std::vector<Label> labels;
  for (int i = 0; i < 53; ++i) labels.push_back(i % 4 == 0 ? Label::Bot : Label::Human);
  const auto f = stratified_folds(labels, 5, 1);
  EXPECT_EQ(f, stratified_folds(labels, 5, 1));
  EXPECT_NE(f, stratified_folds(labels, 5, 2));
  for (std::size_t k = 0; k < 5; ++k) {
    std::size_t bots = 0, total = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (f[i] == k) {
        ++total;
        bots += labels[i] == Label::Bot;
      }
    EXPECT_GE(bots, 2u);
    EXPECT_LE(bots, 3u);
    EXPECT_GE(total, 10u);
    EXPECT_LE(total, 11u);
  }
}

TEST(CrossValidation, ThreadCountDoesNotMatter) {
  Rng rng(8);
  const auto data = gen::separable_corpus(rng, 150);
  const auto clf = baseline_classifier({10, 8, 0});
  const auto a = cross_validate(data, 3, 42, clf, 1);
  const auto b = cross_validate(data, 3, 42, clf, 3);
  EXPECT_EQ(a.fold_f1, b.fold_f1);
  EXPECT_EQ(a.fold_of, b.fold_of);
  EXPECT_EQ(a.fold_of, stratified_folds(labels_of(data), 3, 42));
  EXPECT_THROW(cross_validate(data, 1, 42, clf), std::invalid_argument);
}

TEST(CorpusFile, RejectsBadRows) {
  std::istringstream in("label,language,text\nbot,en,buy now\nhuman,en,hello\nrobot,en,x\nbot,en,\n");
  const auto c = load_labeled_corpus(in);
  EXPECT_EQ(c.examples.size(), 2u);
  EXPECT_EQ(c.rows, 4u);
  EXPECT_EQ(c.rejected, 2u);
}

TEST(ScoreFile, ImportCountsAndDuplicates) {
  std::istringstream in(
      "user_id,bot_probability\nu1,0.5\nu2,0.499\nu3,1.5\n,0.2\nu4,abc\nu1,0.1\nu5,1\n");
  const auto r = import_scores(in);
  EXPECT_EQ(r.rows, 7u);
  EXPECT_EQ(r.rejected, 3u);
  EXPECT_EQ(r.duplicates, 1u);
  ASSERT_EQ(r.labels.size(), 3u);
  EXPECT_EQ(r.labels[0].user_id(), "u1");
  EXPECT_EQ(r.labels[0].probability(), 0.1);  // last value, first position
  EXPECT_EQ(r.labels[1].label(), Label::Human);
  EXPECT_EQ(r.labels[2].label(), Label::Bot);
}

TEST(ScoreFile, FormatRoundTrip) {
  const std::vector<BotLabel> labels = {BotLabel::create("a", 0.1 + 0.2), BotLabel::create("b,c", 0.5)};
  std::istringstream in(format_scores(labels));
  const auto r = import_scores(in);
  EXPECT_EQ(r.rejected, 0u);
  EXPECT_EQ(r.labels, labels);
}

TEST(ScoreFile, MissingColumnIsInputError) {
  std::istringstream in("user,score\nu1,0.5\n");
  EXPECT_THROW(import_scores(in), InputError);
}
