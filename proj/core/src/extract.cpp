#include <algorithm>
#include <unordered_set>

#include <unicode/uchar.h>

#include "cybergeo/data.hpp"
#include "cybergeo/geolocate.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

constexpr std::size_t kMaxSpanTokens = 3;
constexpr char32_t kBreak = U'|';

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

bool is_emoji(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  if (c == 0x200D || c == 0xFE0F || c == 0xFE0E || c == 0x20E3) return true;
  if (c < 0x80) return false;
  return u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) ||
         u_hasBinaryProperty(cp, UCHAR_EMOJI_MODIFIER) ||
         u_hasBinaryProperty(cp, UCHAR_REGIONAL_INDICATOR);
}

bool is_comma(char32_t c) { return c == U',' || c == U'，' || c == U'、' || c == U'،'; }

bool is_break(char32_t c) {
  switch (c) {
    case U';': case U'|': case U'/': case U'\\': case U'•': case U'·': case U'(':
    case U')': case U'[': case U']': case U'{': case U'}': case U'"': case U'“':
    case U'”': case U'«': case U'»': case U'<': case U'>': case U'+': case U'&':
    case U'~': case U'*': case U'=':
      return true;
    default:
      return false;
  }
}

bool is_sentence_end(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == U'。' || c == U'！' || c == U'？' ||
         c == U'…';
}

bool is_dash(char32_t c) { return c == U'-' || c == U'\u2013' || c == U'\u2014'; }

struct Token {
  std::u32string text;
  std::string utf8;
  std::size_t position = 0;
  bool capitalized = false;
  bool stopword = false;
  bool has_letter = false;
  bool sentence_initial = false;
};

struct Segment {
  std::vector<Token> tokens;
  bool comma_before = false;
  bool comma_after = false;
};

struct Span {
  std::string text;
  std::size_t begin = 0;  // global token positions, [begin, end)
  std::size_t end = 0;
  std::size_t core = 0;  // first token after leading stopwords
  bool trimmed = false;  // the stripped twin of a span with leading stopwords
};

class Tokenizer {
 public:
  Tokenizer(const Stopwords& stopwords) : stopwords_(stopwords) {}

  std::vector<Segment> run(const std::u32string& text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char32_t c = text[i];
      const bool next_is_gap = i + 1 == text.size() || is_space(text[i + 1]);
      if (is_space(c)) {
        flush();
      } else if (is_comma(c)) {
        end_segment(true);
      } else if (c == kBreak || is_break(c)) {
        end_segment(false);
      } else if (is_sentence_end(c)) {
        if (c == U'.' && !token_.empty() && !next_is_gap) {
          token_.push_back(c);  // U.S.A, example.org
        } else {
          end_segment(false);
          sentence_start_ = true;
        }
      } else if (is_dash(c) && token_.empty() && next_is_gap) {
        end_segment(false);
      } else {
        token_.push_back(c);
      }
    }
    end_segment(false);
    segments_.erase(std::remove_if(segments_.begin(), segments_.end(),
                                   [](const Segment& s) { return s.tokens.empty(); }),
                    segments_.end());
    return std::move(segments_);
  }

 private:
  void flush() {
    std::size_t b = 0;
    std::size_t e = token_.size();
    while (b < e && u_ispunct(static_cast<UChar32>(token_[b]))) ++b;
    while (e > b && u_ispunct(static_cast<UChar32>(token_[e - 1]))) --e;
    if (b == e) {
      token_.clear();
      return;
    }
    Token t;
    t.text = token_.substr(b, e - b);
    token_.clear();
    t.utf8 = u32_to_utf8(t.text);
    t.position = position_++;
    t.sentence_initial = sentence_start_;
    sentence_start_ = false;
    for (char32_t c : t.text) {
      if (!u_isalpha(static_cast<UChar32>(c))) continue;
      if (!t.has_letter) t.capitalized = u_isupper(static_cast<UChar32>(c)) || u_istitle(static_cast<UChar32>(c));
      t.has_letter = true;
    }
    t.stopword = stopwords_.contains(to_lower(t.utf8));
    current_.tokens.push_back(std::move(t));
  }

  void end_segment(bool comma) {
    flush();
    current_.comma_after = comma;
    segments_.push_back(std::move(current_));
    current_ = Segment{};
    current_.comma_before = comma;
  }

  const Stopwords& stopwords_;
  std::u32string token_;
  Segment current_;
  std::vector<Segment> segments_;
  std::size_t position_ = 0;
  bool sentence_start_ = true;
};

std::string join(const std::vector<Token>& tokens, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (i > b) out.push_back(' ');
    out += tokens[i].utf8;
  }
  return out;
}

Span make_span(const std::vector<Token>& tokens, std::size_t b, std::size_t e, bool trimmed = false) {
  std::size_t core = b;
  while (core + 1 < e && tokens[core].stopword) ++core;
  return {join(tokens, b, e), tokens[b].position, tokens[e - 1].position + 1, tokens[core].position,
          trimmed};
}

class CandidateList {
 public:
  void add(std::string text, CandidateSource source) {
    std::string key = normalize_name(text);
    if (key.empty() || !seen_.insert(std::move(key)).second) return;
    out_.push_back({std::move(text), source});
  }
  std::vector<CandidateSpan> take() { return std::move(out_); }

 private:
  std::unordered_set<std::string> seen_;
  std::vector<CandidateSpan> out_;
};

// Pairs along positionally ordered spans, skipping spans that overlap the
// previous one in the chain.
void add_adjacent_pairs(const std::vector<Span>& spans, CandidateList& out) {
  const Span* prev = nullptr;
  for (const auto& s : spans) {
    if (prev && s.begin < prev->end) continue;
    if (prev) out.add(prev->text + ", " + s.text, CandidateSource::PairSynthesis);
    prev = &s;
  }
}

}  // namespace

const Stopwords& Stopwords::builtin() {
  static const Stopwords words = parse(builtin_stopwords_text());
  return words;
}

Stopwords Stopwords::parse(std::string_view text) {
  Stopwords s;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    if (!line.empty() && line.front() != '#') s.words_.insert(to_lower(line));
    start = end + 1;
  }
  return s;
}

std::string strip_noise(std::string_view description) {
  const std::u32string text = utf8_to_u32(description);
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    const bool word_start = i == 0 || is_space(text[i - 1]) || text[i - 1] == kBreak;
    if (word_start) {
      auto rest = std::u32string_view(text).substr(i);
      const bool url = rest.starts_with(U"http://") || rest.starts_with(U"https://") ||
                       rest.starts_with(U"www.");
      const bool mention = c == U'@' && rest.size() > 1 && !is_space(rest[1]);
      if (url || mention) {
        while (i < text.size() && !is_space(text[i])) ++i;
        out.push_back(kBreak);
        continue;
      }
    }
    if (is_emoji(c)) {
      out.push_back(kBreak);
    } else {
      out.push_back(c);
    }
    ++i;
  }
  return u32_to_utf8(out);
}

std::vector<CandidateSpan> extract_candidates(std::string_view description,
                                              const Stopwords& stopwords) {
  const std::u32string text = utf8_to_u32(strip_noise(description));
  const std::vector<Segment> segments = Tokenizer(stopwords).run(text);

  std::vector<Span> primary;
  std::vector<Span> inner;  // shorter n-grams inside capitalized runs
  bool any_capitalized = false;
  for (const auto& seg : segments) {
    const auto& toks = seg.tokens;
    for (std::size_t i = 0; i < toks.size();) {
      if (!toks[i].capitalized) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < toks.size() && toks[j].capitalized) ++j;
      // Leading capitalized stopwords belong to names ("Los Angeles", "La
      // Paz"); trailing ones never do.
      std::size_t e = j;
      while (e > i && toks[e - 1].stopword) --e;
      std::size_t core = i;
      while (core < e && toks[core].stopword) ++core;
      const bool sentence_case = j - i == 1 && toks[i].sentence_initial && j < toks.size() &&
                                 !toks[j].capitalized;
      if (core < e && !sentence_case) {
        any_capitalized = true;
        if (e - i <= kMaxSpanTokens) primary.push_back(make_span(toks, i, e));
        if (core > i && e - core <= kMaxSpanTokens) primary.push_back(make_span(toks, core, e, true));
        for (std::size_t a = core; a < e; ++a)
          for (std::size_t b = a + 1; b <= e && b - a <= kMaxSpanTokens; ++b)
            if (!toks[a].stopword && !toks[b - 1].stopword) inner.push_back(make_span(toks, a, b));
      }
      i = j;
    }
    if (seg.comma_before || seg.comma_after) {
      std::size_t b = 0;
      std::size_t e = toks.size();
      while (b < e && toks[b].stopword && !toks[b].capitalized) ++b;
      while (e > b && toks[e - 1].stopword) --e;
      const bool lettered = std::any_of(toks.begin() + static_cast<std::ptrdiff_t>(b),
                                        toks.begin() + static_cast<std::ptrdiff_t>(e),
                                        [](const Token& t) { return t.has_letter && !t.stopword; });
      if (e > b && e - b <= kMaxSpanTokens && lettered) primary.push_back(make_span(toks, b, e));
    }
  }
  std::stable_sort(primary.begin(), primary.end(), [](const Span& a, const Span& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end > b.end;
  });

  CandidateList out;
  for (const auto& s : primary) out.add(s.text, CandidateSource::CapitalizedNGram);
  for (const auto& s : inner) out.add(s.text, CandidateSource::CapitalizedNGram);

  std::vector<std::vector<Span>> unigram_runs;
  if (!any_capitalized) {
    for (const auto& seg : segments) {
      const auto& toks = seg.tokens;
      for (std::size_t i = 0; i < toks.size();) {
        if (toks[i].stopword || !toks[i].has_letter) {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < toks.size() && !toks[j].stopword && toks[j].has_letter) ++j;
        auto& run = unigram_runs.emplace_back();
        for (std::size_t a = i; a < j; ++a) {
          run.push_back(make_span(toks, a, a + 1));
          for (std::size_t n = 1; n <= kMaxSpanTokens && a + n <= j; ++n)
            out.add(join(toks, a, a + n), CandidateSource::CapitalizedNGram);
        }
        i = j;
      }
    }
  }

  // Deduplicated primary chains for pairing: one preferring the longest
  // span at each position, one with leading stopwords stripped.
  for (const bool stripped : {false, true}) {
    std::vector<Span> chain;
    std::unordered_set<std::string> seen;
    for (const auto& s : primary) {
      if (stripped ? s.begin != s.core : s.trimmed) continue;
      if (seen.insert(normalize_name(s.text)).second) chain.push_back(s);
    }
    add_adjacent_pairs(chain, out);
  }
  for (const auto& run : unigram_runs) add_adjacent_pairs(run, out);
  return out.take();
}

std::vector<CandidateSpan> candidates_from_entities(const std::vector<std::string>& spans) {
  CandidateList out;
  std::vector<std::string> kept;
  for (const auto& s : spans) {
    const std::string t(trim(s));
    if (t.empty()) continue;
    out.add(t, CandidateSource::EntityExtractor);
    kept.push_back(t);
  }
  for (std::size_t i = 1; i < kept.size(); ++i)
    out.add(kept[i - 1] + ", " + kept[i], CandidateSource::PairSynthesis);
  return out.take();
}

}  // namespace cybergeo
