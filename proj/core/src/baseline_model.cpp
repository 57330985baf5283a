#include <stdexcept>

#include "cybergeo/binio.hpp"
#include "cybergeo/botscore.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/random.hpp"

namespace cybergeo {
namespace {

constexpr std::string_view kMagic = "CGBOTMDL";

}  // namespace

BaselineModel BaselineModel::train(const std::vector<LabeledExample>& data, std::uint64_t seed,
                                   const ForestConfig& config) {
  if (data.empty()) throw std::invalid_argument("no training data");
  bool bot = false;
  bool human = false;
  std::vector<std::vector<std::string>> docs;
  std::vector<Label> labels;
  docs.reserve(data.size());
  labels.reserve(data.size());
  for (const auto& ex : data) {
    (ex.label == Label::Bot ? bot : human) = true;
    docs.push_back(tokenize_multilingual(ex.text));
    labels.push_back(ex.label);
  }
  if (!bot || !human) throw std::invalid_argument("training data holds a single class");

  BaselineModel m;
  m.seed_ = seed;
  m.config_ = config;
  m.vectorizer_ = TfidfVectorizer::fit(docs);
  std::vector<SparseVector> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) rows.push_back(m.vectorizer_.transform(d));
  m.forest_ = RandomForest::train(rows, labels, m.vectorizer_.vocabulary().size(), config,
                                  derive_seed(seed, "forest"));
  return m;
}

double BaselineModel::text_probability(std::string_view text) const {
  return forest_.vote_fraction(vectorizer_.transform_text(text));
}

double BaselineModel::predict_probability(const std::vector<std::string>& texts) const {
  if (texts.empty()) throw std::invalid_argument("no evidence");
  double sum = 0.0;
  for (const auto& t : texts) sum += text_probability(t);
  return sum / static_cast<double>(texts.size());
}

std::string BaselineModel::serialize() const {
  BinaryWriter w;
  w.raw(kMagic);
  w.u32(kModelFormatVersion);
  w.u64(seed_);
  w.u32(config_.n_trees);
  w.u32(config_.max_depth);
  w.u32(config_.features_per_split);
  const auto& vocab = vectorizer_.vocabulary();
  w.u64(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    w.str(vocab[i]);
    w.f64(vectorizer_.idf()[i]);
  }
  w.u64(forest_.trees().size());
  for (const auto& tree : forest_.trees()) {
    w.u64(tree.size());
    for (const auto& n : tree) {
      w.u32(n.feature);
      w.f64(n.threshold);
      w.u32(n.left);
      w.u32(n.right);
      w.u8(n.bot ? 1 : 0);
    }
  }
  return w.take();
}

BaselineModel BaselineModel::deserialize(std::string_view bytes) {
  BinaryReader r(bytes);
  if (bytes.size() < kMagic.size() || r.raw(kMagic.size()) != kMagic)
    throw InputError("not a model file");
  const auto version = r.u32();
  if (version != kModelFormatVersion)
    throw InputError("unsupported model format version " + std::to_string(version));
  BaselineModel m;
  m.seed_ = r.u64();
  m.config_.n_trees = r.u32();
  m.config_.max_depth = r.u32();
  m.config_.features_per_split = r.u32();

  const auto n_terms = r.u64();
  if (n_terms > r.remaining()) throw InputError("truncated binary file");
  std::vector<std::string> vocab;
  std::vector<double> idf;
  vocab.reserve(n_terms);
  idf.reserve(n_terms);
  for (std::uint64_t i = 0; i < n_terms; ++i) {
    vocab.push_back(r.str());
    idf.push_back(r.f64());
  }
  const auto n_trees = r.u64();
  if (n_trees > r.remaining()) throw InputError("truncated binary file");
  std::vector<std::vector<TreeNode>> trees(n_trees);
  for (auto& tree : trees) {
    const auto n_nodes = r.u64();
    if (n_nodes > r.remaining()) throw InputError("truncated binary file");
    tree.resize(n_nodes);
    for (auto& n : tree) {
      n.feature = r.u32();
      n.threshold = r.f64();
      n.left = r.u32();
      n.right = r.u32();
      n.bot = r.u8() != 0;
      if (n.left && n.feature >= n_terms) throw InputError("model references unknown feature");
    }
  }
  if (!r.done()) throw InputError("trailing bytes in model file");
  try {
    m.vectorizer_ = TfidfVectorizer::from_parts(std::move(vocab), std::move(idf));
    m.forest_ = RandomForest::from_trees(std::move(trees));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("corrupt model file: ") + e.what());
  }
  return m;
}

void BaselineModel::save(const std::filesystem::path& path) const {
  write_file_atomic(path, serialize());
}

BaselineModel BaselineModel::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

std::uint64_t BaselineModel::hash() const { return fnv1a64(serialize()); }

Label classify(double probability, double threshold) {
  if (!(probability >= 0.0 && probability <= 1.0))
    throw std::invalid_argument("bot probability outside [0,1]");
  return probability >= threshold ? Label::Bot : Label::Human;
}

}  // namespace cybergeo
