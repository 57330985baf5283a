#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace cybergeo {

// Indel similarity: 1 - indel_distance / (|a| + |b|), which equals
// 2 * LCS / (|a| + |b|). Two empty strings are identical (1.0); exactly one
// empty string gives 0. Inputs are codepoint sequences of already
// normalized names.
double similarity(std::u32string_view a, std::u32string_view b);
double similarity(std::string_view a_utf8, std::string_view b_utf8);

// Similarity for a known LCS length. Computed as the single correctly
// rounded quotient 2*lcs/(la+lb) so equal ratios compare equal.
inline double similarity_from_lcs(std::size_t lcs, std::size_t la, std::size_t lb) {
  if (la + lb == 0) return 1.0;
  return static_cast<double>(2 * lcs) / static_cast<double>(la + lb);
}

std::size_t lcs_length(std::u32string_view a, std::u32string_view b);
std::size_t indel_distance(std::u32string_view a, std::u32string_view b);

// Bit-parallel LCS (Hyyro 2004) against a fixed pattern. Building the
// pattern once per query turns each gazetteer comparison into
// O(|text| * ceil(|pattern| / 64)) word operations.
class LcsPattern {
 public:
  LcsPattern() = default;
  explicit LcsPattern(std::u32string_view pattern);

  std::size_t lcs(std::u32string_view text) const;
  std::size_t size() const { return length_; }

 private:
  const std::uint64_t* masks_for(char32_t c) const;

  std::size_t length_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> ascii_;                 // 128 * words_
  std::vector<std::pair<char32_t, std::size_t>> other_;  // sorted; offset into other_masks_
  std::vector<std::uint64_t> other_masks_;
  std::vector<std::uint64_t> zero_;
};

}  // namespace cybergeo
