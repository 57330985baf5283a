// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any selected criterion fails.
//
//   cybergeo_acceptance [--criterion NAME]... [--list]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "app.hpp"
#include "cybergeo/analytics.hpp"
#include "cybergeo/botscore.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/gazetteer.hpp"
#include "cybergeo/geolocate.hpp"
#include "cybergeo/ingest.hpp"
#include "cybergeo/text.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace cybergeo;

namespace {

// Pinned tolerances and sizes.
constexpr std::size_t kOraclePairs = 100'000;
constexpr double kOracleSeconds = 60.0;
constexpr std::size_t kGazetteerCities = 100'000;
constexpr std::size_t kGazetteerCountries = 200;
constexpr std::size_t kCompletenessQueries = 10'000;
constexpr double kMinPruningSpeedup = 5.0;
constexpr std::size_t kThroughputDescriptions = 20'000;
constexpr double kMinDescriptionsPerSecond = 2000.0;
constexpr std::size_t kScalingThreads = 4;
constexpr double kMinScalingEfficiency = 0.75;  // speedup at 4 threads >= 3.0
constexpr double kRegressionTolerance = 1e-9;
constexpr std::size_t kRegressionDatasets = 10'000;
constexpr std::size_t kCorpusSize = 1000;
constexpr std::size_t kFolds = 5;
constexpr double kMinMeanF1 = 0.95;

const fs::path kFixtures = CYBERGEO_FIXTURE_DIR;

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Shared synthetic gazetteer for the index and throughput criteria.
struct Synthetic {
  std::vector<GazetteerEntry> entries;
  GazetteerIndex index;
};

const Synthetic& synthetic() {
  static const Synthetic s = [] {
    Rng rng(derive_seed(kDefaultSeed, "acceptance-gazetteer"));
    auto entries = gen::gazetteer(rng, kGazetteerCities, kGazetteerCountries);
    auto index = GazetteerIndex::build(entries);
    return Synthetic{std::move(entries), std::move(index)};
  }();
  return s;
}

// ---------------------------------------------------------------------------

Outcome similarity_oracle() {
  Rng rng(derive_seed(kDefaultSeed, "acceptance-oracle"));
  std::size_t mismatches = 0;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < kOraclePairs; ++i) {
    const auto a = gen::u32_string(rng, 32);
    const auto b = rng.below(2) ? gen::mutate(rng, a, rng.below(8)) : gen::u32_string(rng, 32);
    mismatches += similarity(a, b) != oracle::similarity(a, b);
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kOracleSeconds,
          std::to_string(kOraclePairs) + " pairs, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.2f s", secs)};
}

Outcome threshold_strictness() {
  auto make = [](std::string name) {
    GazetteerEntry e;
    e.name_normalized = std::move(name);
    e.country_iso2 = "FR";
    e.population = 5000;
    return e;
  };
  const auto exact_index = GazetteerIndex::build({make("abcdf")});
  const std::vector<CandidateSpan> at = {{"abcde", CandidateSource::EntityExtractor}};
  const double s_at = similarity("abcde", "abcdf");
  const bool absent = !match_location(at, exact_index);

  const std::string head(801, 'a');
  const auto above_index = GazetteerIndex::build({make(head + std::string(199, 'b'))});
  const std::vector<CandidateSpan> above = {{head + std::string(199, 'c'), CandidateSource::EntityExtractor}};
  const auto m = match_location(above, above_index);
  const bool present = m && m->similarity() == 0.801;
  return {s_at == 0.8 && absent && present,
          "similarity 0.80 -> " + std::string(absent ? "absent" : "MATCH") + ", 0.801 -> " +
              (m ? "match " + fmt("%.3f", m->similarity()) : std::string("ABSENT"))};
}

Outcome match_order() {
  auto make = [](PlaceKind kind, std::string name, std::string iso) {
    GazetteerEntry e;
    e.kind = kind;
    e.name_normalized = std::move(name);
    e.country_iso2 = std::move(iso);
    e.population = 5000;
    return e;
  };
  // City key 20 chars, candidate differs in one: 38/40 = 0.95.
  // Pair key "klmnopqrstuvw, zzzzz" vs "klmnopqrstuvw, zzyyy": 34/40 = 0.85.
  const auto index = GazetteerIndex::build({make(PlaceKind::City, "abcdefghijklmnopqrst", "FR"),
                                            make(PlaceKind::Country, "yyyyyyyyyy", "FR"),
                                            make(PlaceKind::City, "klmnopqrstuvw", "US"),
                                            make(PlaceKind::Country, "zzzzz", "US")});
  const std::vector<CandidateSpan> cands = {{"abcdefghijklmnopqrsx", CandidateSource::CapitalizedNGram},
                                            {"klmnopqrstuvw, zzyyy", CandidateSource::PairSynthesis}};
  const auto city = index.best_match(MatchClass::City, PreparedQuery::from_utf8(cands[0].text));
  const auto m = match_location(cands, index);
  const bool ok = city && city->similarity == 0.95 && m && m->match_class() == MatchClass::CityCountryPair &&
                  m->similarity() == 0.85 && m->country_iso2() == "US";
  return {ok, "city scores " + (city ? fmt("%.2f", city->similarity) : std::string("-")) + ", winner " +
                  (m ? std::string(to_string(m->match_class())) + " " + fmt("%.2f", m->similarity()) + " " +
                           m->country_iso2()
                     : std::string("none"))};
}

Outcome index_completeness() {
  const auto& s = synthetic();
  Rng rng(derive_seed(kDefaultSeed, "acceptance-queries"));
  std::vector<PreparedQuery> queries;
  for (std::size_t i = 0; i < kCompletenessQueries; ++i)
    queries.push_back(PreparedQuery::from_utf8(normalize_name(gen::near_query(rng, s.entries))));

  std::vector<std::optional<KeyMatch>> pruned, full;
  auto t0 = Clock::now();
  for (const auto& q : queries) pruned.push_back(s.index.best_match(MatchClass::City, q));
  const double pruned_s = seconds_since(t0);
  t0 = Clock::now();
  for (const auto& q : queries) full.push_back(s.index.best_match_full_scan(MatchClass::City, q));
  const double full_s = seconds_since(t0);

  std::size_t differing = 0, found = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    differing += pruned[i] != full[i];
    found += pruned[i].has_value();
  }
  // The small classes are checked for identity too.
  for (std::size_t i = 0; i < queries.size(); i += 10)
    for (auto cls : {MatchClass::CityCountryPair, MatchClass::Country})
      differing += s.index.best_match(cls, queries[i]) != s.index.best_match_full_scan(cls, queries[i]);

  const double speedup = full_s / std::max(pruned_s, 1e-9);
  return {differing == 0 && speedup >= kMinPruningSpeedup,
          std::to_string(queries.size()) + " queries over " + std::to_string(s.index.key_count(MatchClass::City)) +
              " city keys, " + std::to_string(differing) + " differences, " + std::to_string(found) +
              " matched; pruned " + fmt("%.3f s", pruned_s) + ", full scan " + fmt("%.3f s", full_s) + ", " +
              fmt("%.1fx", speedup)};
}

std::vector<UserRecord> synthetic_users(std::size_t n) {
  const auto& s = synthetic();
  Rng rng(derive_seed(kDefaultSeed, "acceptance-descriptions"));
  std::vector<UserRecord> users;
  for (std::size_t i = 0; i < n; ++i)
    users.push_back({"u" + std::to_string(i), gen::description(rng, s.entries) + " #" + std::to_string(i), {}});
  return users;
}

std::size_t distinct_keys(const std::vector<UserRecord>& users) {
  std::vector<std::string> keys;
  for (const auto& u : users) keys.push_back(description_key(u.description));
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

Outcome throughput() {
  const auto& s = synthetic();
  const auto users = synthetic_users(kThroughputDescriptions);
  const auto t0 = Clock::now();
  const auto matches = geolocate_users(users, s.index, {}, 1);
  const double secs = seconds_since(t0);
  const double rate = static_cast<double>(users.size()) / secs;
  std::size_t located = 0;
  for (const auto& m : matches) located += m.has_value();
  return {rate >= kMinDescriptionsPerSecond,
          std::to_string(users.size()) + " descriptions (" + std::to_string(distinct_keys(users)) +
              " distinct), 1 thread: " + fmt("%.0f/s", rate) + ", " + std::to_string(located) + " located"};
}

Outcome thread_scaling() {
  const auto& s = synthetic();
  const auto users = synthetic_users(kThroughputDescriptions);
  std::vector<double> secs;
  std::vector<std::vector<std::optional<GeoMatch>>> results;
  for (std::size_t t = 1; t <= kScalingThreads; t *= 2) {
    const auto t0 = Clock::now();
    results.push_back(geolocate_users(users, s.index, {}, t));
    secs.push_back(seconds_since(t0));
  }
  bool identical = true;
  for (const auto& r : results) identical = identical && r == results.front();
  const double speedup = secs.front() / secs.back();
  const double needed = kMinScalingEfficiency * static_cast<double>(kScalingThreads);
  std::string detail = "hardware threads " + std::to_string(std::thread::hardware_concurrency()) + "; ";
  for (std::size_t i = 0, t = 1; i < secs.size(); ++i, t *= 2)
    detail += std::to_string(t) + "t " + fmt("%.2f s", secs[i]) + ", ";
  detail += "speedup " + fmt("%.2fx", speedup) + " (need " + fmt("%.1fx", needed) + "), outputs " +
            (identical ? "identical" : "DIFFER");
  return {identical && speedup >= needed, detail};
}

// ---------------------------------------------------------------------------

struct Captured {
  int code;
  std::string err;
};

Captured cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, err.str()};
}

Outcome e2e_golden() {
  const auto e2e = kFixtures / "e2e";
  const auto golden = e2e / "golden";
  const auto work = fs::temp_directory_path() / "cybergeo_acceptance_e2e";
  fs::remove_all(work);
  fs::create_directories(work);
  const auto index = (work / "idx.bin").string();
  if (cli({"gazetteer", "build", "--cities", (kFixtures / "cities.tsv").string(), "--countries",
           (kFixtures / "countries.csv").string(), "--out", index})
          .code != 0)
    return {false, "gazetteer build failed"};

  std::vector<std::string> expected;
  for (const auto& e : fs::directory_iterator(golden)) expected.push_back(e.path().filename().string());
  std::sort(expected.begin(), expected.end());

  std::size_t runs = 0, compared = 0;
  std::vector<std::string> problems;
  for (const std::string threads : {"1", "8"}) {
    for (int repeat = 0; repeat < 2; ++repeat) {
      const auto out = work / ("run_t" + threads + "_" + std::to_string(repeat));
      const auto geo = (out / "geo.csv").string();
      fs::create_directories(out);
      auto r = cli({"--threads", threads, "geolocate", "--users", (e2e / "users.ndjson").string(), "--index", index,
                    "--out", geo});
      if (r.code != 0) return {false, "geolocate failed: " + r.err};
      r = cli({"--threads", threads, "analyze", "all", "--monthly", "--tweets", (e2e / "tweets.ndjson").string(),
               "--geo", geo, "--scores", (e2e / "scores.csv").string(), "--dominant",
               (e2e / "dominant.csv").string(), "--indicators", (e2e / "indicators.csv").string(), "--out",
               out.string()});
      if (r.code != 0) return {false, "analyze failed: " + r.err};
      ++runs;
      std::vector<std::string> produced;
      for (const auto& e : fs::directory_iterator(out)) produced.push_back(e.path().filename().string());
      std::sort(produced.begin(), produced.end());
      if (produced != expected) problems.push_back("file set differs (threads " + threads + ")");
      for (const auto& name : expected) {
        if (!fs::exists(out / name)) continue;
        ++compared;
        if (read_file(out / name) != read_file(golden / name))
          problems.push_back(name + " differs (threads " + threads + ")");
      }
    }
  }
  fs::remove_all(work);
  std::string detail = std::to_string(runs) + " runs (1 and 8 threads, twice each), " + std::to_string(compared) +
                       " file comparisons against " + std::to_string(expected.size()) + " golden files";
  if (!problems.empty()) detail += "; " + problems.front();
  return {problems.empty(), detail};
}

Outcome regression() {
  Rng rng(derive_seed(kDefaultSeed, "acceptance-regression"));
  double worst = 0.0;
  for (std::size_t i = 0; i < kRegressionDatasets; ++i) {
    std::vector<double> x(3 + rng.below(8)), y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] = rng.uniform() * 10.0;
      y[k] = rng.uniform();
    }
    worst = std::max(worst, std::abs(linear_regression(x, y).r_squared - oracle::r_squared(x, y)));
  }
  const auto line = linear_regression({0, 1, 2, 3, 4}, {1, 3, 5, 7, 9});
  const auto flat = linear_regression({1, 2, 3}, {0.3, 0.3, 0.3});
  const bool ok = worst <= kRegressionTolerance && line.r_squared == 1.0 && flat.r_squared == 0.0 && flat.degenerate;
  return {ok, std::to_string(kRegressionDatasets) + " datasets, max |dR2| " + fmt("%.2e", worst) +
                  "; y=2x+1 R2 " + fmt("%.17g", line.r_squared) + "; constant y R2 " +
                  fmt("%g", flat.r_squared) + (flat.degenerate ? " degenerate" : " NOT FLAGGED")};
}

Outcome baseline_cv() {
  Rng rng(derive_seed(kDefaultSeed, "acceptance-corpus"));
  const auto data = gen::separable_corpus(rng, kCorpusSize);
  const auto clf = baseline_classifier();
  const auto a = cross_validate(data, kFolds, kDefaultSeed, clf, 1);
  const auto b = cross_validate(data, kFolds, kDefaultSeed, clf, 1);
  const auto hash_a = BaselineModel::train(data, kDefaultSeed).hash();
  const auto hash_b = BaselineModel::train(data, kDefaultSeed).hash();
  const bool ok = a.mean_f1 >= kMinMeanF1 && a.fold_of == b.fold_of && a.fold_f1 == b.fold_f1 && hash_a == hash_b;
  return {ok, std::to_string(data.size()) + " examples in en/ru/ar/ja, " + std::to_string(kFolds) +
                  "-fold mean F1 " + fmt("%.4f", a.mean_f1) + " (std " + fmt("%.4f", a.std_f1) + "), folds " +
                  (a.fold_of == b.fold_of ? "identical" : "DIFFER") + ", model hash " +
                  (hash_a == hash_b ? "identical" : "DIFFERS")};
}

Outcome classification_boundary() {
  const bool direct = BotLabel::create("u", 0.5).label() == Label::Bot &&
                      BotLabel::create("u", 0.499).label() == Label::Human;
  std::istringstream file("user_id,bot_probability\nat,0.5\nbelow,0.499\n");
  const auto imported = import_scores(file);
  const bool via_import = imported.labels.size() == 2 && imported.labels[0].is_bot() && !imported.labels[1].is_bot();
  return {direct && via_import, std::string("p=0.5 -> ") + (direct ? "Bot" : "?") + ", p=0.499 -> Human; " +
                                    "score import " + (via_import ? "agrees" : "DISAGREES")};
}

Outcome hashtag_merge() {
  const bool merged = normalize_hashtag("COVID19Vaccine") == normalize_hashtag("COVID-19Vaccine");
  const auto attr = make_attribution({{"b", "US", 0, 0, 1, MatchClass::City}}, {BotLabel::create("b", 0.9)});
  std::vector<TweetRecord> tweets;
  const std::vector<std::string> tags = {"COVID19Vaccine", "COVID-19Vaccine", "covid19", "Covid-19", "COVID_19",
                                         "coronavirus", "CoronaVirus", "Coronavirus2019", "Covid", "SARSCoV2",
                                         "masks"};
  for (std::size_t i = 0; i < 20; ++i)
    tweets.push_back({"t" + std::to_string(i), "b", "", "en", "2021-01", tags});
  const auto result = region_hashtags(tweets, attr, builtin_regions(), builtin_ignore_list());
  std::vector<std::string> top;
  std::size_t merged_count = 0;
  bool leaked = false;
  for (const auto& r : result) {
    if (r.region != "United States") continue;
    for (const auto& h : r.top) {
      top.push_back(h.tag);
      if (h.tag == "covid19vaccine") merged_count = h.count;
      // variants are the bare words plus digits/years of covid/corona/sars
      if (h.tag.starts_with("covid") && h.tag != "covid19vaccine") leaked = true;
      if (h.tag.starts_with("corona") || h.tag.starts_with("sars")) leaked = true;
    }
  }
  std::string joined;
  for (const auto& t : top) joined += (joined.empty() ? "" : " ") + t;
  return {merged && merged_count == 40 && !leaked,
          "COVID19Vaccine/COVID-19Vaccine -> one bucket of " + std::to_string(merged_count) + "; top: " + joined};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"similarity_oracle", similarity_oracle},
      {"threshold_strictness", threshold_strictness},
      {"match_order", match_order},
      {"index_completeness", index_completeness},
      {"throughput", throughput},
      {"thread_scaling", thread_scaling},
      {"e2e_golden", e2e_golden},
      {"regression", regression},
      {"baseline_cv", baseline_cv},
      {"classification_boundary", classification_boundary},
      {"hashtag_merge", hashtag_merge},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const auto& c : criteria()) std::cout << c.name << '\n';
      return 0;
    }
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(argv[++i]);
      continue;
    }
    std::cerr << "usage: cybergeo_acceptance [--criterion NAME]... [--list]\n";
    return 2;
  }
  for (const auto& name : selected) {
    const bool known = std::any_of(criteria().begin(), criteria().end(),
                                   [&](const Criterion& c) { return name == c.name; });
    if (!known) {
      std::cerr << "unknown criterion: " << name << '\n';
      return 2;
    }
  }
  int failed = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.name) == selected.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
