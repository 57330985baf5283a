#include <unicode/uchar.h>
#include <unicode/uscript.h>

#include "cybergeo/botscore.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

// Scripts written without spaces between words.
bool unsegmented(char32_t c) {
  if (c < 0x0E00) return false;
  UErrorCode err = U_ZERO_ERROR;
  switch (uscript_getScript(static_cast<UChar32>(c), &err)) {
    case USCRIPT_HAN: case USCRIPT_HIRAGANA: case USCRIPT_KATAKANA: case USCRIPT_THAI:
    case USCRIPT_LAO: case USCRIPT_KHMER: case USCRIPT_MYANMAR:
      return true;
    default:
      return false;
  }
}

bool word_char(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  if (u_isalnum(cp)) return true;
  const auto mask = U_GET_GC_MASK(cp);
  return (mask & (U_GC_MN_MASK | U_GC_MC_MASK | U_GC_ME_MASK)) != 0;
}

void emit_ngrams(const std::u32string& run, std::vector<std::string>& out) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t i = 0; i + n <= run.size(); ++i) out.push_back(u32_to_utf8(run.substr(i, n)));
}

void split_chunk(std::u32string_view chunk, std::vector<std::string>& out) {
  std::u32string word;
  std::u32string run;  // unsegmented-script run
  auto flush_word = [&] {
    if (!word.empty()) out.push_back(u32_to_utf8(word));
    word.clear();
  };
  auto flush_run = [&] {
    if (!run.empty()) emit_ngrams(run, out);
    run.clear();
  };
  for (char32_t c : chunk) {
    if (unsegmented(c) && word_char(c)) {
      flush_word();
      run.push_back(c);
    } else if (word_char(c)) {
      // combining marks stay with the preceding run
      const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
      if (!run.empty() && (mask & (U_GC_MN_MASK | U_GC_MC_MASK))) {
        run.push_back(c);
        continue;
      }
      flush_run();
      word.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))));
    } else {
      flush_word();
      flush_run();
    }
  }
  flush_word();
  flush_run();
}

}  // namespace

std::vector<std::string> tokenize_multilingual(std::string_view text) {
  const std::u32string s = utf8_to_u32(text);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (i == j) break;
    const std::u32string_view chunk(s.data() + i, j - i);
    std::u32string lowered;
    for (std::size_t k = 0; k < chunk.size() && k < 8; ++k)
      lowered.push_back(static_cast<char32_t>(u_tolower(static_cast<UChar32>(chunk[k]))));
    const std::u32string_view head(lowered);
    if (head.starts_with(U"http://") || head.starts_with(U"https://") || head.starts_with(U"www.")) {
      out.emplace_back("<url>");
    } else if (chunk.size() > 1 && chunk[0] == U'@' && word_char(chunk[1])) {
      // "@name:" -> <user>, trailing punctuation dropped
      std::size_t k = 1;
      while (k < chunk.size() && (word_char(chunk[k]) || chunk[k] == U'_')) ++k;
      out.emplace_back("<user>");
      split_chunk(chunk.substr(k), out);
    } else {
      split_chunk(chunk, out);
    }
    i = j;
  }
  return out;
}

}  // namespace cybergeo
