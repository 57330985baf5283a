#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "cybergeo/botscore.hpp"
#include "cybergeo/parallel.hpp"
#include "cybergeo/random.hpp"

namespace cybergeo {
namespace {

// Indices of each class, ascending: [0] Human, [1] Bot.
std::array<std::vector<std::size_t>, 2> by_class(const std::vector<Label>& labels) {
  std::array<std::vector<std::size_t>, 2> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    out[labels[i] == Label::Bot ? 1 : 0].push_back(i);
  return out;
}

}  // namespace

double f1_score(const std::vector<Label>& truth, const std::vector<Label>& predicted) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("truth and prediction lengths differ");
  if (truth.empty()) throw std::invalid_argument("no labels to score");
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == Label::Bot;
    const bool p = predicted[i] == Label::Bot;
    tp += t && p;
    fp += !t && p;
    fn += t && !p;
  }
  // 2PR/(P+R) == 2TP/(2TP+FP+FN); zero when there are no true positives.
  if (tp == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

Split stratified_split(const std::vector<Label>& labels, double train_fraction,
                       std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie in (0,1)");
  auto classes = by_class(labels);
  Rng rng(derive_seed(seed, "split"));
  Split out;
  for (auto& members : classes) {
    if (members.empty()) continue;
    if (members.size() < 2) throw std::invalid_argument("class with fewer than 2 examples");
    const auto n = static_cast<long long>(members.size());
    const long long k = std::clamp(std::llround(train_fraction * static_cast<double>(n)), 1LL, n - 1);
    rng.shuffle(members);
    out.train.insert(out.train.end(), members.begin(), members.begin() + k);
    out.test.insert(out.test.end(), members.begin() + k, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<std::size_t> stratified_folds(const std::vector<Label>& labels, std::size_t k,
                                          std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  auto classes = by_class(labels);
  Rng rng(derive_seed(seed, "folds"));
  std::vector<std::size_t> fold(labels.size(), 0);
  // each class continues where the previous one stopped, so fold sizes
  // differ by at most one overall
  std::size_t offset = 0;
  for (auto& members : classes) {
    if (!members.empty() && members.size() < k)
      throw std::invalid_argument("class has fewer examples than folds");
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i) fold[members[i]] = (offset + i) % k;
    offset = (offset + members.size()) % k;
  }
  return fold;
}

Classifier baseline_classifier(const ForestConfig& config, double threshold) {
  return [config, threshold](const std::vector<LabeledExample>& train,
                             const std::vector<LabeledExample>& test, std::uint64_t seed) {
    const auto model = BaselineModel::train(train, seed, config);
    std::vector<Label> out;
    out.reserve(test.size());
    for (const auto& ex : test) out.push_back(classify(model.text_probability(ex.text), threshold));
    return out;
  };
}

CrossValidation cross_validate(const std::vector<LabeledExample>& data, std::size_t k,
                               std::uint64_t seed, const Classifier& classifier,
                               std::size_t threads) {
  std::vector<Label> labels;
  labels.reserve(data.size());
  for (const auto& ex : data) labels.push_back(ex.label);
  CrossValidation cv;
  cv.fold_of = stratified_folds(labels, k, seed);
  cv.fold_f1.assign(k, 0.0);

  parallel_for(k, threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t f = b; f < e; ++f) {
      std::vector<LabeledExample> train;
      std::vector<LabeledExample> test;
      std::vector<Label> truth;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (cv.fold_of[i] == f) {
          test.push_back(data[i]);
          truth.push_back(data[i].label);
        } else {
          train.push_back(data[i]);
        }
      }
      cv.fold_f1[f] = f1_score(truth, classifier(train, test, derive_seed(seed, "fold", f)));
    }
  });

  double sum = 0.0;
  for (double v : cv.fold_f1) sum += v;
  cv.mean_f1 = sum / static_cast<double>(k);
  double ss = 0.0;
  for (double v : cv.fold_f1) ss += (v - cv.mean_f1) * (v - cv.mean_f1);
  cv.std_f1 = std::sqrt(ss / static_cast<double>(k));
  return cv;
}

}  // namespace cybergeo
