#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cybergeo/botscore.hpp"

namespace cybergeo {

double SparseVector::at(std::uint32_t feature) const {
  const auto it = std::lower_bound(index.begin(), index.end(), feature);
  if (it == index.end() || *it != feature) return 0.0;
  return value[static_cast<std::size_t>(it - index.begin())];
}

TfidfVectorizer TfidfVectorizer::fit(const std::vector<std::vector<std::string>>& documents) {
  if (documents.empty()) throw std::invalid_argument("empty corpus");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& doc : documents) {
    std::vector<std::string> terms(doc);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& t : terms) ++df[std::move(t)];
  }
  if (df.empty()) throw std::invalid_argument("corpus has no terms");

  const double n = static_cast<double>(documents.size());
  TfidfVectorizer v;
  v.vocabulary_.reserve(df.size());
  v.idf_.reserve(df.size());
  for (const auto& [term, count] : df) {
    v.vocabulary_.push_back(term);
    v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return v;
}

TfidfVectorizer TfidfVectorizer::fit_texts(const std::vector<std::string>& corpus) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const auto& t : corpus) docs.push_back(tokenize_multilingual(t));
  return fit(docs);
}

TfidfVectorizer TfidfVectorizer::from_parts(std::vector<std::string> vocabulary,
                                            std::vector<double> idf) {
  if (vocabulary.size() != idf.size())
    throw std::invalid_argument("vocabulary and idf differ in length");
  for (std::size_t i = 1; i < vocabulary.size(); ++i)
    if (!(vocabulary[i - 1] < vocabulary[i]))
      throw std::invalid_argument("vocabulary is not strictly sorted");
  TfidfVectorizer v;
  v.vocabulary_ = std::move(vocabulary);
  v.idf_ = std::move(idf);
  return v;
}

std::ptrdiff_t TfidfVectorizer::term_index(std::string_view term) const {
  const auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), term,
                                   [](const std::string& a, std::string_view b) { return a < b; });
  if (it == vocabulary_.end() || *it != term) return -1;
  return it - vocabulary_.begin();
}

SparseVector TfidfVectorizer::transform(const std::vector<std::string>& tokens) const {
  std::vector<std::uint32_t> hits;
  hits.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto k = term_index(t);
    if (k >= 0) hits.push_back(static_cast<std::uint32_t>(k));
  }
  std::sort(hits.begin(), hits.end());

  SparseVector out;
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    out.index.push_back(hits[i]);
    out.value.push_back(static_cast<double>(j - i) * idf_[hits[i]]);
    i = j;
  }
  double norm = 0.0;
  for (double w : out.value) norm += w * w;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& w : out.value) w /= norm;
  }
  return out;
}

SparseVector TfidfVectorizer::transform_text(std::string_view text) const {
  return transform(tokenize_multilingual(text));
}

}  // namespace cybergeo
