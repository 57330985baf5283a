#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "cybergeo/botscore.hpp"
#include "cybergeo/csv.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/format.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

constexpr std::size_t kMaxWarnings = 50;

void warn(std::vector<std::string>& warnings, std::string msg) {
  if (warnings.size() < kMaxWarnings) warnings.push_back(std::move(msg));
}

bool blank(const CsvRow& row) { return row.size() == 1 && trim(row[0]).empty(); }

}  // namespace

CorpusLoad load_labeled_corpus(std::istream& in) {
  CsvReader reader(in);
  CsvRow row;
  CorpusLoad out;
  if (!reader.next(row)) {
    warn(out.warnings, "corpus is empty");
    return out;
  }
  const CsvHeader h(row);
  const auto c_label = h.require("label");
  const auto c_lang = h.require("language");
  const auto c_text = h.require("text");
  const std::size_t width = std::max({c_label, c_lang, c_text}) + 1;
  while (reader.next(row)) {
    if (blank(row)) continue;
    ++out.rows;
    const std::string where = "line " + std::to_string(reader.line()) + ": ";
    if (row.size() < width) {
      ++out.rejected;
      warn(out.warnings, where + "too few columns");
      continue;
    }
    const std::string label = to_lower(trim(row[c_label]));
    LabeledExample ex;
    if (label == "bot") {
      ex.label = Label::Bot;
    } else if (label == "human") {
      ex.label = Label::Human;
    } else {
      ++out.rejected;
      warn(out.warnings, where + "unknown label '" + row[c_label] + "'");
      continue;
    }
    if (trim(row[c_text]).empty()) {
      ++out.rejected;
      warn(out.warnings, where + "empty text");
      continue;
    }
    ex.language = canonical_language(row[c_lang]);
    ex.text = std::move(row[c_text]);
    out.examples.push_back(std::move(ex));
  }
  return out;
}

CorpusLoad load_labeled_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_labeled_corpus(in);
}

ScoreImport import_scores(std::istream& in, double threshold) {
  CsvReader reader(in);
  CsvRow row;
  ScoreImport out;
  if (!reader.next(row)) {
    warn(out.warnings, "score file is empty");
    return out;
  }
  const CsvHeader h(row);
  const auto c_user = h.require("user_id");
  const auto c_prob = h.require("bot_probability");
  const std::size_t width = std::max(c_user, c_prob) + 1;
  std::unordered_map<std::string, std::size_t> position;
  while (reader.next(row)) {
    if (blank(row)) continue;
    ++out.rows;
    const std::string where = "line " + std::to_string(reader.line()) + ": ";
    if (row.size() < width) {
      ++out.rejected;
      warn(out.warnings, where + "too few columns");
      continue;
    }
    std::string user(trim(row[c_user]));
    const auto text = trim(row[c_prob]);
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    if (user.empty()) {
      ++out.rejected;
      warn(out.warnings, where + "empty user_id");
      continue;
    }
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
        !(p >= 0.0 && p <= 1.0)) {
      ++out.rejected;
      warn(out.warnings, where + "bot_probability '" + row[c_prob] + "' outside [0,1]");
      continue;
    }
    auto label = BotLabel::create(user, p, threshold);
    if (auto it = position.find(user); it != position.end()) {
      ++out.duplicates;
      warn(out.warnings, where + "duplicate user_id '" + user + "', last value kept");
      out.labels[it->second] = std::move(label);
    } else {
      position.emplace(std::move(user), out.labels.size());
      out.labels.push_back(std::move(label));
    }
  }
  if (out.rows == 0) warn(out.warnings, "score file has no rows");
  return out;
}

ScoreImport import_scores(const std::filesystem::path& path, double threshold) {
  auto in = open_input(path);
  return import_scores(in, threshold);
}

std::string format_scores(const std::vector<BotLabel>& labels) {
  CsvWriter w;
  w.row({"user_id", "bot_probability"});
  for (const auto& l : labels) w.row({l.user_id(), format_exact(l.probability())});
  return w.str();
}

}  // namespace cybergeo
