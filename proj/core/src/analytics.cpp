#include "cybergeo/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "cybergeo/geolocate.hpp"

namespace cybergeo {
namespace {

struct Tally {
  std::set<std::string> users;
  std::set<std::string> bots;
};

template <typename Row, typename KeyFn, typename ValueFn>
std::map<std::string, std::vector<double>> collect(const std::vector<std::vector<Row>>& monthly,
                                                   KeyFn key, ValueFn value) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& month : monthly)
    for (const auto& row : month)
      if (auto v = value(row)) out[key(row)].push_back(*v);
  return out;
}

}  // namespace

const std::string* Attribution::country_of(const std::string& user) const {
  const auto it = country.find(user);
  return it == country.end() ? nullptr : &it->second;
}

std::optional<Label> Attribution::label_of(const std::string& user) const {
  const auto it = label.find(user);
  if (it != label.end()) return it->second;
  if (drop_unlabeled) return std::nullopt;
  return Label::Human;
}

Attribution make_attribution(const std::vector<GeoRow>& geo, const std::vector<BotLabel>& labels,
                             bool drop_unlabeled) {
  Attribution a;
  a.drop_unlabeled = drop_unlabeled;
  for (const auto& g : geo) a.country[g.user_id] = g.country_iso2;
  for (const auto& l : labels) a.label[l.user_id()] = l.label();
  return a;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of nothing");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean of nothing");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// ----------------------------------------------------------------------------

std::vector<CountryMetrics> country_bot_metrics(const std::vector<TweetRecord>& slice,
                                                const Attribution& attribution,
                                                std::string_view month) {
  std::map<std::string, Tally> by_country;
  for (const auto& t : slice) {
    const std::string* iso = attribution.country_of(t.user_id);
    if (!iso) continue;
    const auto label = attribution.label_of(t.user_id);
    if (!label) continue;
    auto& tally = by_country[*iso];
    tally.users.insert(t.user_id);
    if (*label == Label::Bot) tally.bots.insert(t.user_id);
  }
  std::size_t total_bots = 0;
  for (const auto& [iso, tally] : by_country) total_bots += tally.bots.size();

  std::vector<CountryMetrics> out;
  out.reserve(by_country.size());
  for (const auto& [iso, tally] : by_country) {
    CountryMetrics m;
    m.country_iso2 = iso;
    m.month = std::string(month);
    m.n_users = tally.users.size();
    m.n_bots = tally.bots.size();
    m.bot_rate = static_cast<double>(m.n_bots) / static_cast<double>(m.n_users);
    m.share_defined = total_bots > 0;
    m.bot_share = m.share_defined ? static_cast<double>(m.n_bots) / static_cast<double>(total_bots) : 0.0;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<CountryMetrics> aggregate_median(const std::vector<std::vector<CountryMetrics>>& monthly,
                                             const std::vector<CountryMetrics>& overall) {
  const auto key = [](const CountryMetrics& m) { return m.country_iso2; };
  const auto rates = collect(monthly, key, [](const CountryMetrics& m) { return std::optional(m.bot_rate); });
  const auto shares = collect(monthly, key, [](const CountryMetrics& m) {
    return m.share_defined ? std::optional(m.bot_share) : std::nullopt;
  });
  std::map<std::string, const CountryMetrics*> totals;
  for (const auto& m : overall) totals[m.country_iso2] = &m;

  std::vector<CountryMetrics> out;
  for (const auto& [iso, values] : rates) {
    CountryMetrics m;
    m.country_iso2 = iso;
    m.month = std::string(kAllMonths);
    m.n_months = values.size();
    if (auto it = totals.find(iso); it != totals.end()) {
      m.n_users = it->second->n_users;
      m.n_bots = it->second->n_bots;
    }
    m.bot_rate = median(values);
    if (auto it = shares.find(iso); it != shares.end()) {
      m.bot_share = median(it->second);
      m.share_defined = true;
    }
    out.push_back(std::move(m));
  }
  return out;
}

// ----------------------------------------------------------------------------

std::vector<LanguageMetrics> language_bot_metrics(const std::vector<TweetRecord>& slice,
                                                  const Attribution& attribution,
                                                  std::string_view month) {
  std::map<std::string, Tally> by_lang;
  for (const auto& t : slice) {
    const auto label = attribution.label_of(t.user_id);
    if (!label) continue;
    auto& tally = by_lang[t.lang];
    tally.users.insert(t.user_id);
    if (*label == Label::Bot) tally.bots.insert(t.user_id);
  }
  std::vector<LanguageMetrics> out;
  out.reserve(by_lang.size());
  for (const auto& [lang, tally] : by_lang) {
    LanguageMetrics m;
    m.lang = lang;
    m.month = std::string(month);
    m.n_users = tally.users.size();
    m.n_bots = tally.bots.size();
    m.bot_rate = static_cast<double>(m.n_bots) / static_cast<double>(m.n_users);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<LanguageMetrics> aggregate_mean(const std::vector<std::vector<LanguageMetrics>>& monthly,
                                            const std::vector<LanguageMetrics>& overall) {
  const auto rates = collect(monthly, [](const LanguageMetrics& m) { return m.lang; },
                             [](const LanguageMetrics& m) { return std::optional(m.bot_rate); });
  std::map<std::string, const LanguageMetrics*> totals;
  for (const auto& m : overall) totals[m.lang] = &m;
  std::vector<LanguageMetrics> out;
  for (const auto& [lang, values] : rates) {
    LanguageMetrics m;
    m.lang = lang;
    m.month = std::string(kAllMonths);
    m.n_months = values.size();
    if (auto it = totals.find(lang); it != totals.end()) {
      m.n_users = it->second->n_users;
      m.n_bots = it->second->n_bots;
    }
    m.bot_rate = mean(values);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<LanguageMetrics> top_n(std::vector<LanguageMetrics> metrics, std::size_t n) {
  std::sort(metrics.begin(), metrics.end(), [](const LanguageMetrics& a, const LanguageMetrics& b) {
    if (a.bot_rate != b.bot_rate) return a.bot_rate > b.bot_rate;
    if (a.n_users != b.n_users) return a.n_users > b.n_users;
    return a.lang < b.lang;
  });
  if (metrics.size() > n) metrics.resize(n);
  return metrics;
}

// ----------------------------------------------------------------------------

std::vector<DominantLanguageMetrics> dominant_language_fraction(
    const std::vector<TweetRecord>& slice, const Attribution& attribution,
    const DominantLanguageTable& table, std::string_view month) {
  std::map<std::string, Tally> by_country;  // users = bots, bots = bots in a dominant language
  for (const auto& t : slice) {
    const std::string* iso = attribution.country_of(t.user_id);
    if (!iso) continue;
    const auto dominant = table.find(*iso);
    if (dominant == table.end()) continue;
    if (attribution.label_of(t.user_id) != Label::Bot) continue;
    auto& tally = by_country[*iso];
    tally.users.insert(t.user_id);
    const auto& langs = dominant->second;
    if (std::find(langs.begin(), langs.end(), t.lang) != langs.end()) tally.bots.insert(t.user_id);
  }
  std::vector<DominantLanguageMetrics> out;
  for (const auto& [iso, tally] : by_country) {
    DominantLanguageMetrics m;
    m.country_iso2 = iso;
    m.month = std::string(month);
    m.n_bots = tally.users.size();
    m.n_dominant = tally.bots.size();
    m.fraction = static_cast<double>(m.n_dominant) / static_cast<double>(m.n_bots);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<DominantLanguageMetrics> aggregate_mean(
    const std::vector<std::vector<DominantLanguageMetrics>>& monthly,
    const std::vector<DominantLanguageMetrics>& overall) {
  const auto fractions =
      collect(monthly, [](const DominantLanguageMetrics& m) { return m.country_iso2; },
              [](const DominantLanguageMetrics& m) { return std::optional(m.fraction); });
  std::map<std::string, const DominantLanguageMetrics*> totals;
  for (const auto& m : overall) totals[m.country_iso2] = &m;
  std::vector<DominantLanguageMetrics> out;
  for (const auto& [iso, values] : fractions) {
    DominantLanguageMetrics m;
    m.country_iso2 = iso;
    m.month = std::string(kAllMonths);
    m.n_months = values.size();
    if (auto it = totals.find(iso); it != totals.end()) {
      m.n_bots = it->second->n_bots;
      m.n_dominant = it->second->n_dominant;
    }
    m.fraction = mean(values);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<LanguageBreakdown> under_threshold_breakdown(
    const std::vector<DominantLanguageMetrics>& aggregated, const std::vector<TweetRecord>& tweets,
    const Attribution& attribution, double threshold) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& m : aggregated)
    if (m.fraction < threshold) counts[m.country_iso2];
  for (const auto& t : tweets) {
    const std::string* iso = attribution.country_of(t.user_id);
    if (!iso) continue;
    auto it = counts.find(*iso);
    if (it == counts.end() || attribution.label_of(t.user_id) != Label::Bot) continue;
    ++it->second[t.lang];
  }
  std::vector<LanguageBreakdown> out;
  for (const auto& m : aggregated) {
    auto it = counts.find(m.country_iso2);
    if (it == counts.end()) continue;
    LanguageBreakdown b;
    b.country_iso2 = m.country_iso2;
    b.fraction = m.fraction;
    for (const auto& [lang, n] : it->second) b.languages.push_back({lang, n});
    std::stable_sort(b.languages.begin(), b.languages.end(),
                     [](const LanguageCount& x, const LanguageCount& y) { return x.n_tweets > y.n_tweets; });
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end(), [](const LanguageBreakdown& a, const LanguageBreakdown& b) {
    return a.country_iso2 < b.country_iso2;
  });
  return out;
}

// ----------------------------------------------------------------------------

RegressionResult linear_regression(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("regression needs at least 2 points");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("non-finite regression input");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate regressor");
  RegressionResult r;
  r.n = x.size();
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  // exact test on the inputs; syy picks up rounding from the mean
  if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) {
    r.degenerate = true;
    r.r_squared = 0.0;
    return r;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.intercept + r.slope * x[i]);
    ss_res += e * e;
  }
  r.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return r;
}

std::vector<IndicatorRegression> regress_indicators(const std::vector<CountryMetrics>& aggregate,
                                                    const IndicatorTable& indicators) {
  std::vector<IndicatorRegression> out;
  for (const std::string indicator : {"gdp_usd", "population"}) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& m : aggregate) {
      const auto it = indicators.find(m.country_iso2);
      if (it == indicators.end()) continue;
      x.push_back(indicator == "gdp_usd" ? it->second.gdp_usd : it->second.population);
      y.push_back(m.bot_rate);
    }
    IndicatorRegression reg{indicator, "bot_rate", std::nullopt, {}};
    try {
      reg.result = linear_regression(x, y);
    } catch (const std::invalid_argument& e) {
      reg.note = e.what();
    }
    out.push_back(std::move(reg));
  }
  return out;
}

// ----------------------------------------------------------------------------

std::vector<RegionHashtagResult> region_hashtags(const std::vector<TweetRecord>& tweets,
                                                 const Attribution& attribution,
                                                 const RegionTable& regions,
                                                 const HashtagIgnoreList& ignore, std::size_t top) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  for (const auto& name : region_names(regions)) counts[name];
  for (const auto& t : tweets) {
    if (t.hashtags.empty()) continue;
    const std::string* iso = attribution.country_of(t.user_id);
    if (!iso) continue;
    const auto region = regions.find(*iso);
    if (region == regions.end() || attribution.label_of(t.user_id) != Label::Bot) continue;
    auto& bucket = counts[region->second];
    for (const auto& raw : t.hashtags) {
      std::string tag = normalize_hashtag(raw);
      if (tag.empty() || ignore.contains(tag)) continue;
      ++bucket[std::move(tag)];
    }
  }
  std::vector<RegionHashtagResult> out;
  for (const auto& [region, tags] : counts) {
    RegionHashtagResult r;
    r.region = region;
    for (const auto& [tag, n] : tags) r.top.push_back({tag, n});
    std::stable_sort(r.top.begin(), r.top.end(),
                     [](const HashtagCount& a, const HashtagCount& b) { return a.count > b.count; });
    if (r.top.size() > top) r.top.resize(top);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cybergeo
