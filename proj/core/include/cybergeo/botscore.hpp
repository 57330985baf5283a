#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "cybergeo/model.hpp"

namespace cybergeo {

struct LabeledExample {
  std::string text;
  Label label = Label::Human;
  std::string language;

  bool operator==(const LabeledExample&) const = default;
};

// Lowercased terms. Space-delimited scripts split into words of letters,
// digits and marks; runs of Han, kana, Thai, Lao, Khmer or Myanmar
// codepoints (scripts written without spaces) yield all
// character 1-grams, then 2-grams, then 3-grams. URLs become "<url>" and
// @mentions "<user>".
std::vector<std::string> tokenize_multilingual(std::string_view text);

// Sparse row: strictly increasing feature indices.
struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t size() const { return index.size(); }
  double at(std::uint32_t feature) const;  // 0 when absent
};

class TfidfVectorizer {
 public:
  // idf(t) = ln((1 + N) / (1 + df(t))) + 1 over the tokenized documents.
  // Throws std::invalid_argument when the corpus is empty or every document
  // is empty.
  static TfidfVectorizer fit(const std::vector<std::vector<std::string>>& documents);
  static TfidfVectorizer fit_texts(const std::vector<std::string>& corpus);
  static TfidfVectorizer from_parts(std::vector<std::string> vocabulary, std::vector<double> idf);

  // Raw counts times idf, L2 normalized. Out-of-vocabulary terms weigh 0.
  SparseVector transform(const std::vector<std::string>& tokens) const;
  SparseVector transform_text(std::string_view text) const;

  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  // Index of a term in the sorted vocabulary, or -1.
  std::ptrdiff_t term_index(std::string_view term) const;

 private:
  std::vector<std::string> vocabulary_;  // sorted
  std::vector<double> idf_;
};

struct ForestConfig {
  std::uint32_t n_trees = 100;
  std::uint32_t max_depth = 32;
  std::uint32_t features_per_split = 0;  // 0: floor(sqrt(vocabulary size)), at least 1

  bool operator==(const ForestConfig&) const = default;
};

struct TreeNode {
  std::uint32_t feature = 0;
  double threshold = 0.0;   // go left when value <= threshold
  std::uint32_t left = 0;   // 0 marks a leaf
  std::uint32_t right = 0;
  bool bot = false;         // leaf vote

  bool operator==(const TreeNode&) const = default;
};

// Bagged CART trees (Gini impurity) over sparse rows. Each split considers
// a uniform sample of the features that vary inside the node.
class RandomForest {
 public:
  static RandomForest train(const std::vector<SparseVector>& rows, const std::vector<Label>& labels,
                            std::size_t n_features, const ForestConfig& config, std::uint64_t seed);

  // Fraction of trees voting Bot.
  double vote_fraction(const SparseVector& row) const;
  std::size_t tree_count() const { return trees_.size(); }
  const std::vector<std::vector<TreeNode>>& trees() const { return trees_; }
  static RandomForest from_trees(std::vector<std::vector<TreeNode>> trees);

 private:
  std::vector<std::vector<TreeNode>> trees_;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

// TF-IDF vectorizer plus forest.
class BaselineModel {
 public:
  // Throws std::invalid_argument on empty data or when only one class is
  // present.
  static BaselineModel train(const std::vector<LabeledExample>& data, std::uint64_t seed,
                             const ForestConfig& config = {});

  double text_probability(std::string_view text) const;
  // Mean of text_probability over the texts; throws std::invalid_argument
  // ("no evidence") for an empty list.
  double predict_probability(const std::vector<std::string>& texts) const;

  std::string serialize() const;
  static BaselineModel deserialize(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static BaselineModel load(const std::filesystem::path& path);
  // FNV-1a of the serialized bytes.
  std::uint64_t hash() const;

  const TfidfVectorizer& vectorizer() const { return vectorizer_; }
  const RandomForest& forest() const { return forest_; }
  std::uint64_t seed() const { return seed_; }
  const ForestConfig& config() const { return config_; }

 private:
  BaselineModel() = default;

  TfidfVectorizer vectorizer_;
  RandomForest forest_;
  std::uint64_t seed_ = 0;
  ForestConfig config_;
};

// Bot iff probability >= threshold. Throws std::invalid_argument outside
// [0, 1].
Label classify(double probability, double threshold = kDefaultBotThreshold);

// ----------------------------------------------------------------------------
// Evaluation
// ----------------------------------------------------------------------------

// F1 with Bot as the positive class; 0 when precision + recall is 0.
// Throws std::invalid_argument on length mismatch or empty input.
double f1_score(const std::vector<Label>& truth, const std::vector<Label>& predicted);

struct Split {
  std::vector<std::size_t> train;  // ascending indices
  std::vector<std::size_t> test;
};

// Per class, llround(train_fraction * n) examples (clamped to [1, n-1]) go
// to train. Throws std::invalid_argument when a class has fewer than 2
// examples or the fraction is outside (0, 1).
Split stratified_split(const std::vector<Label>& labels, double train_fraction,
                       std::uint64_t seed);

// Fold of each example: per class, a seeded shuffle then position mod k.
std::vector<std::size_t> stratified_folds(const std::vector<Label>& labels, std::size_t k,
                                          std::uint64_t seed);

// Trains on `train`, predicts `test`. The seed is derived per fold.
using Classifier = std::function<std::vector<Label>(const std::vector<LabeledExample>& train,
                                                    const std::vector<LabeledExample>& test,
                                                    std::uint64_t seed)>;

Classifier baseline_classifier(const ForestConfig& config = {},
                               double threshold = kDefaultBotThreshold);

struct CrossValidation {
  double mean_f1 = 0.0;
  double std_f1 = 0.0;  // population standard deviation over folds
  std::vector<double> fold_f1;
  std::vector<std::size_t> fold_of;
};

// Throws std::invalid_argument when k < 2 or a class has fewer than k
// examples. Folds may run on up to `threads` workers; results do not depend
// on the thread count.
CrossValidation cross_validate(const std::vector<LabeledExample>& data, std::size_t k,
                               std::uint64_t seed, const Classifier& classifier,
                               std::size_t threads = 1);

// ----------------------------------------------------------------------------
// Files
// ----------------------------------------------------------------------------

struct CorpusLoad {
  std::vector<LabeledExample> examples;
  std::size_t rows = 0;
  std::size_t rejected = 0;
  std::vector<std::string> warnings;
};

// CSV with header label,language,text; label is "bot" or "human". Rows
// with an unknown label or empty text are rejected and counted.
CorpusLoad load_labeled_corpus(std::istream& in);
CorpusLoad load_labeled_corpus(const std::filesystem::path& path);

struct ScoreImport {
  std::vector<BotLabel> labels;  // first-seen order
  std::size_t rows = 0;
  std::size_t rejected = 0;
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

// CSV with header user_id,bot_probability. Rows with an empty id or a
// probability that is unparseable or outside [0, 1] are rejected; a repeated
// user_id replaces the earlier value and adds a warning.
ScoreImport import_scores(std::istream& in, double threshold = kDefaultBotThreshold);
ScoreImport import_scores(const std::filesystem::path& path,
                          double threshold = kDefaultBotThreshold);

std::string format_scores(const std::vector<BotLabel>& labels);

}  // namespace cybergeo
