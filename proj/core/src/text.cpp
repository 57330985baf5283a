#include "cybergeo/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "cybergeo/errors.hpp"

namespace cybergeo {
namespace {

const icu::Normalizer2& nfkd() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFKDInstance(status);
    if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFKD normalizer unavailable");
    return n;
  }();
  return *instance;
}

icu::UnicodeString to_icu(std::string_view utf8) {
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

std::string from_icu(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_mark(UChar32 c) {
  const auto mask = U_GET_GC_MASK(c);
  return (mask & (U_GC_MN_MASK | U_GC_MC_MASK | U_GC_ME_MASK)) != 0;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }
bool is_punct(UChar32 c) { return u_ispunct(c) != 0; }

icu::UnicodeString apply_nfkd(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfkd().normalize(s, status);
  if (U_FAILURE(status)) throw Error("NFKD normalization failed");
  return out;
}

}  // namespace

std::u32string utf8_to_u32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string u32_to_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      n = 0;
      U8_APPEND_UNSAFE(buf, n, 0xFFFD);
    }
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::string to_lower(std::string_view utf8) {
  icu::UnicodeString s = to_icu(utf8);
  s.toLower(icu::Locale::getRoot());
  return from_icu(s);
}

std::string to_upper(std::string_view utf8) {
  icu::UnicodeString s = to_icu(utf8);
  s.toUpper(icu::Locale::getRoot());
  return from_icu(s);
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::string collapse_whitespace(std::string_view utf8) {
  const std::u32string cps = utf8_to_u32(utf8);
  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
    if (is_space(static_cast<UChar32>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return u32_to_utf8(out);
}

std::string normalize_name(std::string_view raw) {
  if (raw.empty()) return {};
  icu::UnicodeString s = apply_nfkd(to_icu(raw));
  s.toLower(icu::Locale::getRoot());
  s = apply_nfkd(s);

  std::u32string cps;
  cps.reserve(static_cast<std::size_t>(s.length()));
  bool pending_space = false;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (is_mark(c)) continue;
    if (is_space(c)) {
      pending_space = !cps.empty();
      continue;
    }
    if (pending_space) cps.push_back(U' ');
    pending_space = false;
    cps.push_back(static_cast<char32_t>(c));
  }

  std::size_t begin = 0;
  std::size_t end = cps.size();
  auto strippable = [](char32_t c) {
    return is_punct(static_cast<UChar32>(c)) || is_space(static_cast<UChar32>(c));
  };
  while (begin < end && strippable(cps[begin])) ++begin;
  while (end > begin && strippable(cps[end - 1])) --end;
  return u32_to_utf8(std::u32string_view(cps).substr(begin, end - begin));
}

}  // namespace cybergeo
