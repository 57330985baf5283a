#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cybergeo/botscore.hpp"
#include "cybergeo/random.hpp"

namespace cybergeo {
namespace {

struct Sample {
  std::uint32_t row;
  double weight;
};

struct FeatureStat {
  std::uint32_t present = 0;
  double min = 0.0;
  double max = 0.0;
};

struct Point {
  double value;
  double weight;
  bool bot;
};

double gini_weighted(double bot, double total) {
  if (total <= 0.0) return 0.0;
  const double p = bot / total;
  return total * (1.0 - p * p - (1.0 - p) * (1.0 - p));
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<SparseVector>& rows, const std::vector<Label>& labels,
              std::size_t n_features, const ForestConfig& config, std::size_t mtry,
              std::uint64_t seed)
      : rows_(rows), labels_(labels), config_(config), mtry_(mtry), rng_(seed),
        stats_(n_features), touched_flag_(n_features, 0) {}

  std::vector<TreeNode> build() {
    std::vector<std::uint32_t> counts(rows_.size(), 0);
    for (std::size_t i = 0; i < rows_.size(); ++i) ++counts[rng_.below(rows_.size())];
    std::vector<Sample> samples;
    for (std::uint32_t i = 0; i < counts.size(); ++i)
      if (counts[i]) samples.push_back({i, static_cast<double>(counts[i])});
    nodes_.clear();
    grow(samples, 0);
    return std::move(nodes_);
  }

 private:
  std::uint32_t grow(const std::vector<Sample>& samples, std::uint32_t depth) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    double bot = 0.0;
    double total = 0.0;
    for (const auto& s : samples) {
      total += s.weight;
      if (labels_[s.row] == Label::Bot) bot += s.weight;
    }
    nodes_[id].bot = bot > total - bot;
    if (depth >= config_.max_depth || bot == 0.0 || bot == total || samples.size() < 2) return id;

    std::vector<std::uint32_t> features = varying_features(samples);
    if (features.empty()) return id;
    const std::size_t take = std::min(mtry_, features.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_.below(features.size() - i));
      std::swap(features[i], features[j]);
    }

    double best_impurity = std::numeric_limits<double>::infinity();
    std::uint32_t best_feature = 0;
    double best_threshold = 0.0;
    std::vector<Point> points;
    points.reserve(samples.size());
    for (std::size_t fi = 0; fi < take; ++fi) {
      const std::uint32_t f = features[fi];
      points.clear();
      for (const auto& s : samples)
        points.push_back({rows_[s.row].at(f), s.weight, labels_[s.row] == Label::Bot});
      std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.bot < b.bot;
      });
      double left_bot = 0.0;
      double left_total = 0.0;
      for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        left_total += points[i].weight;
        if (points[i].bot) left_bot += points[i].weight;
        if (points[i].value == points[i + 1].value) continue;
        const double impurity = gini_weighted(left_bot, left_total) +
                                gini_weighted(bot - left_bot, total - left_total);
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = f;
          const double a = points[i].value;
          const double b = points[i + 1].value;
          best_threshold = a + (b - a) / 2.0;
          if (best_threshold >= b) best_threshold = a;  // adjacent doubles
        }
      }
    }
    if (!std::isfinite(best_impurity)) return id;

    std::vector<Sample> left;
    std::vector<Sample> right;
    for (const auto& s : samples)
      (rows_[s.row].at(best_feature) <= best_threshold ? left : right).push_back(s);
    nodes_[id].feature = best_feature;
    nodes_[id].threshold = best_threshold;
    const std::uint32_t l = grow(left, depth + 1);
    const std::uint32_t r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  // Features whose value is not the same across every sample, ascending.
  std::vector<std::uint32_t> varying_features(const std::vector<Sample>& samples) {
    std::vector<std::uint32_t> touched;
    for (const auto& s : samples) {
      const auto& row = rows_[s.row];
      for (std::size_t k = 0; k < row.size(); ++k) {
        const auto f = row.index[k];
        const double v = row.value[k];
        auto& st = stats_[f];
        if (!touched_flag_[f]) {
          touched_flag_[f] = 1;
          touched.push_back(f);
          st = {1, v, v};
        } else {
          ++st.present;
          st.min = std::min(st.min, v);
          st.max = std::max(st.max, v);
        }
      }
    }
    std::vector<std::uint32_t> out;
    for (const auto f : touched) {
      const auto& st = stats_[f];
      const bool has_implicit_zero = st.present < samples.size();
      const bool varies = st.min != st.max || (has_implicit_zero && (st.min != 0.0 || st.max != 0.0));
      if (varies) out.push_back(f);
      touched_flag_[f] = 0;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const std::vector<SparseVector>& rows_;
  const std::vector<Label>& labels_;
  const ForestConfig& config_;
  std::size_t mtry_;
  Rng rng_;
  std::vector<FeatureStat> stats_;
  std::vector<std::uint8_t> touched_flag_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RandomForest RandomForest::train(const std::vector<SparseVector>& rows,
                                 const std::vector<Label>& labels, std::size_t n_features,
                                 const ForestConfig& config, std::uint64_t seed) {
  if (rows.size() != labels.size()) throw std::invalid_argument("rows and labels differ in length");
  if (rows.empty()) throw std::invalid_argument("no training rows");
  if (config.n_trees == 0) throw std::invalid_argument("forest needs at least one tree");
  for (const auto& r : rows)
    for (auto f : r.index)
      if (f >= n_features) throw std::invalid_argument("feature index out of range");
  std::size_t mtry = config.features_per_split;
  if (mtry == 0)
    mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features))));

  RandomForest forest;
  forest.trees_.reserve(config.n_trees);
  for (std::uint32_t t = 0; t < config.n_trees; ++t) {
    TreeBuilder builder(rows, labels, n_features, config, mtry, derive_seed(seed, "tree", t));
    forest.trees_.push_back(builder.build());
  }
  return forest;
}

RandomForest RandomForest::from_trees(std::vector<std::vector<TreeNode>> trees) {
  if (trees.empty()) throw std::invalid_argument("forest without trees");
  for (const auto& tree : trees) {
    if (tree.empty()) throw std::invalid_argument("empty tree");
    for (std::size_t i = 0; i < tree.size(); ++i) {
      const auto& n = tree[i];
      if ((n.left == 0) != (n.right == 0) || (n.left && (n.left <= i || n.left >= tree.size())) ||
          (n.right && (n.right <= i || n.right >= tree.size())))
        throw std::invalid_argument("malformed tree");
    }
  }
  RandomForest f;
  f.trees_ = std::move(trees);
  return f;
}

double RandomForest::vote_fraction(const SparseVector& row) const {
  std::size_t bot = 0;
  for (const auto& tree : trees_) {
    std::uint32_t n = 0;
    while (tree[n].left != 0) n = row.at(tree[n].feature) <= tree[n].threshold ? tree[n].left : tree[n].right;
    bot += tree[n].bot;
  }
  return static_cast<double>(bot) / static_cast<double>(trees_.size());
}

}  // namespace cybergeo
