#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#if defined(__GNUC__) && defined(__x86_64__)
#include <immintrin.h>
#endif

#include "cybergeo/binio.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/gazetteer.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {
namespace {

constexpr std::string_view kIndexMagic = "CGGAZIDX";

struct Stamps {
  std::vector<std::uint32_t> mark;
  std::uint32_t generation = 0;

  // Fresh generation over n keys.
  void reset(std::size_t n) {
    if (mark.size() < n) mark.resize(n, 0);
    if (++generation == 0) {
      std::fill(mark.begin(), mark.end(), 0);
      generation = 1;
    }
  }
  bool first_visit(std::uint32_t k) {
    if (mark[k] == generation) return false;
    mark[k] = generation;
    return true;
  }
};

std::array<std::size_t, 32> class_counts(std::u32string_view text) {
  std::array<std::size_t, 32> n{};
  for (char32_t c : text) ++n[c & 31u];
  return n;
}

// Offsets i in [0, n) with signature_bound(q, sigs[i]) >= need, appended to
// out. Branch-free so the band scan stays a straight pass over memory.
void filter_signatures_generic(const Signature& q, const Signature* sigs, std::size_t n,
                               std::size_t need, std::vector<std::uint32_t>& out) {
  const std::size_t base = out.size();
  out.resize(base + n);
  std::uint32_t* dst = out.data() + base;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dst[kept] = static_cast<std::uint32_t>(i);
    kept += signature_bound(q, sigs[i]) >= need;
  }
  out.resize(base + kept);
}

#if defined(__GNUC__) && defined(__x86_64__)
__attribute__((target("avx2"))) void filter_signatures_avx2(const Signature& q, const Signature* sigs,
                                                             std::size_t n, std::size_t need,
                                                             std::vector<std::uint32_t>& out) {
  const std::size_t base = out.size();
  out.resize(base + n);
  std::uint32_t* dst = out.data() + base;
  const __m256i low = _mm256_set1_epi8(0x0F);
  const __m256i vq = _mm256_broadcastsi128_si256(_mm_loadu_si128(reinterpret_cast<const __m128i*>(q.data())));
  const __m256i qlo = _mm256_and_si256(vq, low);
  const __m256i qhi = _mm256_and_si256(_mm256_srli_epi16(vq, 4), low);
  std::size_t kept = 0, i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(sigs[i].data()));
    const __m256i lo = _mm256_min_epu8(_mm256_and_si256(v, low), qlo);
    const __m256i hi = _mm256_min_epu8(_mm256_and_si256(_mm256_srli_epi16(v, 4), low), qhi);
    __m256i sum = _mm256_sad_epu8(_mm256_add_epi8(lo, hi), _mm256_setzero_si256());
    sum = _mm256_add_epi64(sum, _mm256_shuffle_epi32(sum, 0x4E));
    dst[kept] = static_cast<std::uint32_t>(i);
    kept += static_cast<std::size_t>(_mm256_extract_epi64(sum, 0)) >= need;
    dst[kept] = static_cast<std::uint32_t>(i + 1);
    kept += static_cast<std::size_t>(_mm256_extract_epi64(sum, 2)) >= need;
  }
  for (; i < n; ++i) {
    dst[kept] = static_cast<std::uint32_t>(i);
    kept += signature_bound(q, sigs[i]) >= need;
  }
  out.resize(base + kept);
}
#endif

void filter_signatures(const Signature& q, const Signature* sigs, std::size_t n, std::size_t need,
                       std::vector<std::uint32_t>& out) {
#if defined(__GNUC__) && defined(__x86_64__)
  static const bool avx2 = __builtin_cpu_supports("avx2");
  if (avx2) return filter_signatures_avx2(q, sigs, n, need, out);
#endif
  filter_signatures_generic(q, sigs, n, need, out);
}

}  // namespace

Signature char_signature(std::u32string_view text) {
  const auto n = class_counts(text);
  Signature sig{};
  for (std::size_t i = 0; i < 16; ++i)
    sig[i] = static_cast<std::uint8_t>(std::min<std::size_t>(n[i], 15) | std::min<std::size_t>(n[i + 16], 15) << 4);
  return sig;
}

std::size_t signature_excess(std::u32string_view text) {
  std::size_t excess = 0;
  for (auto n : class_counts(text)) excess += n > 15 ? n - 15 : 0;
  return excess;
}

PreparedQuery::PreparedQuery(std::u32string text)
    : text_(std::move(text)),
      pattern_(text_),
      signature_(char_signature(text_)),
      signature_excess_(cybergeo::signature_excess(text_)) {
  std::vector<std::uint32_t> all;
  for (std::size_t i = 0; i + 1 < text_.size(); ++i) all.push_back(bigram_bucket(text_[i], text_[i + 1]));
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    bigrams_.emplace_back(all[i], static_cast<std::uint32_t>(j - i));
    i = j;
  }
}

PreparedQuery PreparedQuery::from_utf8(std::string_view normalized) {
  return PreparedQuery(utf8_to_u32(normalized));
}

GazetteerIndex GazetteerIndex::build(std::vector<GazetteerEntry> entries) {
  if (entries.empty()) throw std::invalid_argument("empty gazetteer");
  if (entries.size() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("gazetteer too large");
  for (const auto& e : entries) validate_entry(e);
  GazetteerIndex index;
  index.entries_ = std::move(entries);
  index.build_tables();
  return index;
}

void GazetteerIndex::build_tables() {
  using RawKey = std::pair<std::u32string, std::uint32_t>;
  std::array<std::vector<RawKey>, 3> raw;
  auto& pairs = raw[static_cast<std::size_t>(MatchClass::CityCountryPair)];
  auto& countries = raw[static_cast<std::size_t>(MatchClass::Country)];
  auto& cities = raw[static_cast<std::size_t>(MatchClass::City)];

  std::map<std::string, std::vector<std::string>> country_names;
  for (const auto& e : entries_) {
    if (e.kind != PlaceKind::Country) continue;
    auto& names = country_names[e.country_iso2];
    names.push_back(e.name_normalized);
    names.insert(names.end(), e.aliases.begin(), e.aliases.end());
  }

  for (std::uint32_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    auto& target = e.kind == PlaceKind::City ? cities : countries;
    target.emplace_back(utf8_to_u32(e.name_normalized), i);
    for (const auto& alias : e.aliases)
      if (!alias.empty()) target.emplace_back(utf8_to_u32(alias), i);
    if (e.kind != PlaceKind::City) continue;
    const auto it = country_names.find(e.country_iso2);
    if (it == country_names.end()) continue;
    for (const auto& country : it->second)
      pairs.emplace_back(utf8_to_u32(e.name_normalized + ", " + country), i);
  }

  for (std::size_t c = 0; c < 3; ++c) {
    auto& keys = raw[c];
    std::sort(keys.begin(), keys.end(), [](const RawKey& a, const RawKey& b) {
      if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
      return std::tie(a.first, a.second) < std::tie(b.first, b.second);
    });
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    KeyTable& t = tables_[c];
    const std::size_t max_len = keys.empty() ? 0 : keys.back().first.size();
    t.by_length.assign(max_len + 2, 0);
    for (const auto& [text, entry] : keys) {
      t.offset.push_back(static_cast<std::uint32_t>(t.chars.size()));
      t.length.push_back(static_cast<std::uint32_t>(text.size()));
      t.entry.push_back(entry);
      t.signature.push_back(char_signature(text));
      t.chars.insert(t.chars.end(), text.begin(), text.end());
      ++t.by_length[text.size() + 1];
    }
    for (std::size_t l = 1; l < t.by_length.size(); ++l) t.by_length[l] += t.by_length[l - 1];
    // counting sort of (length, bucket, key) triples
    std::vector<std::uint32_t> buckets;
    t.posting_start.assign((max_len + 1) * kBigramBuckets + 1, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;  // (slot, key)
    for (std::uint32_t k = 0; k < t.size(); ++k) {
      const auto text = t.text(k);
      buckets.clear();
      for (std::size_t i = 0; i + 1 < text.size(); ++i) buckets.push_back(bigram_bucket(text[i], text[i + 1]));
      std::sort(buckets.begin(), buckets.end());
      buckets.erase(std::unique(buckets.begin(), buckets.end()), buckets.end());
      for (auto g : buckets) {
        const auto slot = static_cast<std::uint32_t>(text.size() * kBigramBuckets + g);
        cells.emplace_back(slot, k);
        ++t.posting_start[slot + 1];
      }
    }
    for (std::size_t i = 1; i < t.posting_start.size(); ++i) t.posting_start[i] += t.posting_start[i - 1];
    t.postings.resize(cells.size());
    auto fill = t.posting_start;
    for (const auto& [slot, k] : cells) t.postings[fill[slot]++] = k;
  }
}

std::size_t GazetteerIndex::city_count() const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [](const auto& e) { return e.kind == PlaceKind::City; }));
}

std::size_t GazetteerIndex::country_count() const { return entries_.size() - city_count(); }

std::size_t GazetteerIndex::alias_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.aliases.size();
  return n;
}

std::string GazetteerIndex::key_text(MatchClass cls, std::uint32_t key) const {
  return u32_to_utf8(table(cls).text(key));
}

std::size_t GazetteerIndex::bucket_count(MatchClass cls) const {
  const KeyTable& t = table(cls);
  std::size_t n = 0;
  for (std::size_t band = 0; band * kLengthBandWidth <= t.max_length(); ++band) {
    const std::size_t lo = band * kLengthBandWidth;
    const std::size_t hi = std::min(lo + kLengthBandWidth, t.max_length() + 1);
    n += t.by_length[hi] > t.by_length[lo];
  }
  return n;
}

bool GazetteerIndex::ranks_before(MatchClass cls, const KeyMatch& a, const KeyMatch& b) const {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  const auto& ea = entries_[a.entry];
  const auto& eb = entries_[b.entry];
  if (ea.population != eb.population) return ea.population > eb.population;
  const KeyTable& t = table(cls);
  const auto ta = t.text(a.key);
  const auto tb = t.text(b.key);
  if (ta != tb) return ta < tb;
  if (ea.name_normalized != eb.name_normalized) return ea.name_normalized < eb.name_normalized;
  if (a.entry != b.entry) return a.entry < b.entry;
  return a.key < b.key;
}

// Visits exact key lengths nearest-first: la, la+1, la-1, la+2, ... while a
// perfect LCS could still clear the threshold at that length.
template <typename Visit>
void GazetteerIndex::scan_lengths(const KeyTable& t, std::size_t la, double threshold,
                                  Visit&& visit) const {
  const std::size_t max_len = t.max_length();
  if (la == 0 || max_len == 0) return;
  auto reachable = [&](std::size_t lb) {
    return similarity_from_lcs(std::min(la, lb), la, lb) > threshold;
  };
  bool up = true;
  bool down = true;
  for (std::size_t step = 0; up || down; ++step) {
    if (up) {
      const std::size_t lb = la + step;
      if (lb > max_len || !reachable(lb)) {
        up = false;
      } else if (t.by_length[lb + 1] > t.by_length[lb]) {
        visit(lb, t.by_length[lb], t.by_length[lb + 1]);
      }
    }
    if (down && step > 0) {
      if (step >= la || !reachable(la - step)) {
        down = false;
      } else {
        const std::size_t lb = la - step;
        if (lb <= max_len && t.by_length[lb + 1] > t.by_length[lb])
          visit(lb, t.by_length[lb], t.by_length[lb + 1]);
      }
    }
  }
}

std::optional<KeyMatch> GazetteerIndex::best_match(MatchClass cls, const PreparedQuery& query,
                                                   double threshold, double at_least) const {
  const KeyTable& t = table(cls);
  const std::size_t la = query.size();
  const auto& qsig = query.signature();
  const std::size_t excess = query.signature_excess();
  std::optional<KeyMatch> best;
  scan_lengths(t, la, threshold, [&](std::size_t lb, std::uint32_t begin, std::uint32_t end) {
    const std::size_t longest = std::min(la, lb);
    // Smallest LCS that still clears the threshold and could tie the best
    // so far; kept integral so the per-key test is a compare.
    std::size_t need = longest + 1;
    while (need > 0 && similarity_from_lcs(need - 1, la, lb) > threshold) --need;
    auto tighten = [&] {
      const double floor = best ? std::max(at_least, best->similarity) : at_least;
      while (need <= longest && similarity_from_lcs(need, la, lb) < floor) ++need;
    };
    tighten();
    if (need > longest) return;
    auto consider = [&](std::uint32_t k) {
      if (signature_bound(qsig, t.signature[k]) + excess < need) return;
      const std::size_t lcs = query.pattern().lcs(t.text(k));
      if (lcs < need) return;
      const KeyMatch m{t.entry[k], k, similarity_from_lcs(lcs, la, lb), lcs};
      if (!best || ranks_before(cls, m, *best)) {
        best = m;
        tighten();
      }
    };
    // Signature pass over the band in chunks, so tightening between chunks
    // still prunes.
    auto scan_band = [&] {
      thread_local std::vector<std::uint32_t> pass;
      constexpr std::uint32_t kChunk = 4096;
      for (std::uint32_t lo = begin; lo < end && need <= longest; lo += kChunk) {
        const std::uint32_t hi = std::min(end, lo + kChunk);
        pass.clear();
        filter_signatures(qsig, t.signature.data() + lo, hi - lo, need > excess ? need - excess : 0, pass);
        for (const auto i : pass) consider(lo + i);
      }
    };

    // Bigram prefix filter. Take an optimal alignment with LCS m; of its
    // m - 1 consecutive matched pairs at most la - m are split by a gap in
    // the query and lb - m by a gap in the key, so at least
    // T = 3m - 1 - la - lb query bigrams occur in the key. Any la - T of the
    // query's la - 1 bigram positions therefore include one the key holds.
    const std::size_t m = need;
    const auto& grams = query.bigrams();
    const auto shared = static_cast<std::ptrdiff_t>(3 * m + 1) - static_cast<std::ptrdiff_t>(la + lb + 2);
    if (shared <= 0 || grams.empty()) {
      scan_band();
      return;
    }
    const std::size_t positions = la - static_cast<std::size_t>(shared);
    const std::uint32_t* starts = t.posting_start.data() + lb * kBigramBuckets;
    auto list_size = [&](std::uint32_t g) { return starts[g + 1] - starts[g]; };
    thread_local std::vector<std::pair<std::uint32_t, std::uint32_t>> order;  // (list size, gram index)
    order.clear();
    for (std::uint32_t i = 0; i < grams.size(); ++i) order.emplace_back(list_size(grams[i].first), i);
    std::sort(order.begin(), order.end());
    std::size_t chosen = 0, covered = 0, work = 0;
    while (chosen < order.size() && covered < positions) {
      covered += grams[order[chosen].second].second;
      work += order[chosen].first;
      ++chosen;
    }
    // hopping through lists costs roughly four sequential signature checks
    if (covered < positions || work * 4 >= end - begin) {
      scan_band();
      return;
    }
    thread_local Stamps stamps;
    stamps.reset(t.size());
    for (std::size_t j = 0; j < chosen; ++j) {
      const auto g = grams[order[j].second].first;
      for (std::uint32_t p = starts[g]; p < starts[g + 1]; ++p)
        if (stamps.first_visit(t.postings[p])) consider(t.postings[p]);
    }
  });
  return best;
}

std::optional<KeyMatch> GazetteerIndex::best_match_full_scan(MatchClass cls,
                                                             const PreparedQuery& query,
                                                             double threshold) const {
  const KeyTable& t = table(cls);
  const std::size_t la = query.size();
  std::optional<KeyMatch> best;
  for (std::uint32_t k = 0; k < t.size(); ++k) {
    const auto text = t.text(k);
    const std::size_t lcs = query.pattern().lcs(text);
    const double sim = similarity_from_lcs(lcs, la, text.size());
    if (!(sim > threshold)) continue;
    const KeyMatch m{t.entry[k], k, sim, lcs};
    if (!best || ranks_before(cls, m, *best)) best = m;
  }
  return best;
}

std::vector<std::uint32_t> GazetteerIndex::candidate_keys(MatchClass cls,
                                                          const PreparedQuery& query,
                                                          double threshold) const {
  const KeyTable& t = table(cls);
  const std::size_t la = query.size();
  std::vector<std::uint32_t> out;
  scan_lengths(t, la, threshold, [&](std::size_t lb, std::uint32_t begin, std::uint32_t end) {
    for (std::uint32_t k = begin; k < end; ++k) {
      const std::size_t bound =
          std::min(std::min(la, lb), signature_bound(query.signature(), t.signature[k]) + query.signature_excess());
      if (similarity_from_lcs(bound, la, lb) > threshold) out.push_back(k);
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t GazetteerIndex::buckets_visited(MatchClass cls, const PreparedQuery& query,
                                            double threshold) const {
  std::vector<std::size_t> bands;
  scan_lengths(table(cls), query.size(), threshold,
               [&](std::size_t lb, std::uint32_t, std::uint32_t) {
                 bands.push_back(lb / kLengthBandWidth);
               });
  std::sort(bands.begin(), bands.end());
  return static_cast<std::size_t>(std::unique(bands.begin(), bands.end()) - bands.begin());
}

std::string GazetteerIndex::serialize() const {
  BinaryWriter w;
  w.raw(kIndexMagic);
  w.u32(kIndexFormatVersion);
  w.u64(entries_.size());
  for (const auto& e : entries_) {
    w.u8(static_cast<std::uint8_t>(e.kind));
    w.str(e.name_normalized);
    w.u64(e.aliases.size());
    for (const auto& a : e.aliases) w.str(a);
    w.str(e.country_iso2);
    w.f64(e.lat);
    w.f64(e.lon);
    w.u64(e.population);
  }
  return w.take();
}

GazetteerIndex GazetteerIndex::deserialize(std::string_view bytes) {
  BinaryReader r(bytes);
  if (r.remaining() < kIndexMagic.size() || r.raw(kIndexMagic.size()) != kIndexMagic)
    throw InputError("not a gazetteer index file");
  const std::uint32_t version = r.u32();
  if (version != kIndexFormatVersion)
    throw InputError("unsupported gazetteer index version " + std::to_string(version));
  const std::uint64_t n = r.u64();
  std::vector<GazetteerEntry> entries;
  entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, r.remaining())));
  for (std::uint64_t i = 0; i < n; ++i) {
    GazetteerEntry e;
    const std::uint8_t kind = r.u8();
    if (kind > 1) throw InputError("corrupt gazetteer index: bad entry kind");
    e.kind = static_cast<PlaceKind>(kind);
    e.name_normalized = r.str();
    const std::uint64_t aliases = r.u64();
    if (aliases > r.remaining()) throw InputError("truncated binary file");
    for (std::uint64_t a = 0; a < aliases; ++a) e.aliases.push_back(r.str());
    e.country_iso2 = r.str();
    e.lat = r.f64();
    e.lon = r.f64();
    e.population = r.u64();
    entries.push_back(std::move(e));
  }
  if (!r.done()) throw InputError("trailing bytes in gazetteer index");
  try {
    return build(std::move(entries));
  } catch (const std::invalid_argument& ex) {
    throw InputError(std::string("corrupt gazetteer index: ") + ex.what());
  }
}

GazetteerIndex GazetteerIndex::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

void GazetteerIndex::save(const std::filesystem::path& path) const {
  write_file_atomic(path, serialize());
}

}  // namespace cybergeo
