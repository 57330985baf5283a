#pragma once

#include <string>
#include <string_view>

namespace cybergeo {

// UTF-8 <-> UTF-32 conversion. Ill-formed sequences decode to U+FFFD.
std::u32string utf8_to_u32(std::string_view utf8);
std::string u32_to_utf8(std::u32string_view text);

// Canonical form used for every gazetteer key and every query:
// NFKD, combining marks removed, lowercased, whitespace runs collapsed to a
// single space, and leading/trailing whitespace and punctuation removed.
// Idempotent.
std::string normalize_name(std::string_view raw);

// Lowercase using full Unicode case mapping (root locale).
std::string to_lower(std::string_view utf8);
std::string to_upper(std::string_view utf8);

// Trim ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

// Collapse every run of Unicode whitespace to one ASCII space and trim.
std::string collapse_whitespace(std::string_view utf8);

}  // namespace cybergeo
