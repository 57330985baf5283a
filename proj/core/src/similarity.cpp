#include "cybergeo/similarity.hpp"

#include <algorithm>
#include <bit>

#include "cybergeo/text.hpp"

namespace cybergeo {

LcsPattern::LcsPattern(std::u32string_view pattern)
    : length_(pattern.size()), words_((pattern.size() + 63) / 64) {
  ascii_.assign(128 * words_, 0);
  zero_.assign(words_, 0);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const char32_t c = pattern[i];
    const std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (c < 128) {
      ascii_[c * words_ + i / 64] |= bit;
      continue;
    }
    auto it = std::lower_bound(other_.begin(), other_.end(), c,
                               [](const auto& p, char32_t v) { return p.first < v; });
    if (it == other_.end() || it->first != c) {
      const std::size_t offset = other_masks_.size();
      other_masks_.resize(offset + words_, 0);
      it = other_.insert(it, {c, offset});
    }
    other_masks_[it->second + i / 64] |= bit;
  }
}

const std::uint64_t* LcsPattern::masks_for(char32_t c) const {
  if (c < 128) return ascii_.data() + c * words_;
  auto it = std::lower_bound(other_.begin(), other_.end(), c,
                             [](const auto& p, char32_t v) { return p.first < v; });
  if (it == other_.end() || it->first != c) return zero_.data();
  return other_masks_.data() + it->second;
}

std::size_t LcsPattern::lcs(std::u32string_view text) const {
  if (length_ == 0 || text.empty()) return 0;
  if (words_ == 1) {
    std::uint64_t v = ~std::uint64_t{0};
    for (char32_t c : text) {
      const std::uint64_t u = v & *masks_for(c);
      v = (v + u) | (v - u);
    }
    const std::uint64_t live = length_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length_) - 1;
    return static_cast<std::size_t>(std::popcount(~v & live));
  }

  std::vector<std::uint64_t> v(words_, ~std::uint64_t{0});
  for (char32_t c : text) {
    const std::uint64_t* m = masks_for(c);
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t u = v[w] & m[w];
      const std::uint64_t x = v[w] + u;
      const std::uint64_t sum = x + carry;
      const std::uint64_t next_carry = (x < v[w]) | (sum < x);
      v[w] = sum | (v[w] - u);
      carry = next_carry;
    }
  }
  std::size_t zeros = 0;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t live = ~std::uint64_t{0};
    const std::size_t bits = std::min<std::size_t>(64, length_ - 64 * w);
    if (bits < 64) live = (std::uint64_t{1} << bits) - 1;
    zeros += static_cast<std::size_t>(std::popcount(~v[w] & live));
  }
  return zeros;
}

std::size_t lcs_length(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return 0;
  return LcsPattern(a).lcs(b);
}

std::size_t indel_distance(std::u32string_view a, std::u32string_view b) {
  return a.size() + b.size() - 2 * lcs_length(a, b);
}

double similarity(std::u32string_view a, std::u32string_view b) {
  return similarity_from_lcs(lcs_length(a, b), a.size(), b.size());
}

double similarity(std::string_view a_utf8, std::string_view b_utf8) {
  return similarity(utf8_to_u32(a_utf8), utf8_to_u32(b_utf8));
}

}  // namespace cybergeo
