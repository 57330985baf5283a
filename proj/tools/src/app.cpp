#include "app.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cybergeo/analytics.hpp"
#include "cybergeo/botscore.hpp"
#include "cybergeo/csv.hpp"
#include "cybergeo/errors.hpp"
#include "cybergeo/fileio.hpp"
#include "cybergeo/format.hpp"
#include "cybergeo/gazetteer.hpp"
#include "cybergeo/geolocate.hpp"
#include "cybergeo/ingest.hpp"
#include "cybergeo/parallel.hpp"
#include "cybergeo/random.hpp"
#include "cybergeo/text.hpp"
#include "reports.hpp"

namespace cybergeo::cli {
namespace {

struct Globals {
  std::size_t threads = 1;
  std::uint64_t seed = kDefaultSeed;
  bool quiet = false;
};

class Console {
 public:
  Console(std::ostream& out, std::ostream& err, const Globals& g) : out_(out), err_(err), g_(g) {}

  std::ostream& out() { return out_; }
  void warn(const std::string& msg) {
    if (!g_.quiet) err_ << "warning: " << msg << '\n';
  }
  void warnings(std::string_view source, const std::vector<std::string>& list) {
    for (const auto& w : list) warn(std::string(source) + ": " + w);
  }
  void note(const std::string& msg) { err_ << msg << '\n'; }

 private:
  std::ostream& out_;
  std::ostream& err_;
  const Globals& g_;
};

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void check_threshold(double t, std::string_view name) {
  if (!(t > 0.0 && t <= 1.0))
    throw CLI::ValidationError(std::string(name), "must lie in (0, 1]");
}

// ----------------------------------------------------------------------------
// gazetteer build
// ----------------------------------------------------------------------------

struct GazetteerOpts {
  std::string cities;
  std::string countries;
  std::string out;
};

int gazetteer_build(const GazetteerOpts& o, Console& con) {
  auto cities = import_cities(std::filesystem::path(o.cities));
  auto countries = import_countries(std::filesystem::path(o.countries));
  con.warnings("cities", cities.stats.warnings);
  con.warnings("countries", countries.stats.warnings);
  if (cities.entries.empty()) throw InputError("no cities imported from '" + o.cities + "'");
  if (countries.entries.empty()) con.warn("no countries imported; pair and country keys disabled");
  if (cities.stats.malformed || countries.stats.malformed)
    con.note("skipped malformed rows: cities " + std::to_string(cities.stats.malformed) +
             ", countries " + std::to_string(countries.stats.malformed));

  std::vector<GazetteerEntry> entries = std::move(cities.entries);
  entries.insert(entries.end(), std::make_move_iterator(countries.entries.begin()),
                 std::make_move_iterator(countries.entries.end()));
  const auto index = GazetteerIndex::build(std::move(entries));
  index.save(o.out);
  con.out() << "cities: " << index.city_count() << ", countries: " << index.country_count() << '\n';
  con.out() << "aliases: " << index.alias_count()
            << ", keys: " << index.key_count(MatchClass::CityCountryPair) << " pair / "
            << index.key_count(MatchClass::Country) << " country / "
            << index.key_count(MatchClass::City) << " city\n";
  return kExitOk;
}

// ----------------------------------------------------------------------------
// geolocate
// ----------------------------------------------------------------------------

struct GeolocateOpts {
  std::string users;
  std::string index;
  std::string out;
  std::string entities;
  std::string stopwords;
  double threshold = kDefaultMatchThreshold;
};

int geolocate(const GeolocateOpts& o, const Globals& g, Console& con) {
  check_threshold(o.threshold, "--threshold");
  const auto index = GazetteerIndex::load(o.index);
  auto users = load_users(std::filesystem::path(o.users));
  con.warnings("users", users.stats.warnings);

  GeolocateOptions opts;
  opts.threshold = o.threshold;
  EntityMap entities;
  Stopwords stopwords;
  if (!o.entities.empty()) {
    entities = load_entity_file(std::filesystem::path(o.entities));
    opts.entities = &entities;
  }
  if (!o.stopwords.empty()) {
    stopwords = Stopwords::parse(read_file(o.stopwords));
    opts.stopwords = &stopwords;
  }
  const auto matches = geolocate_users(users.value, index, opts, g.threads);
  write_file_atomic(o.out, format_geolocations(users.value, matches));

  std::size_t described = 0;
  std::size_t located = 0;
  for (std::size_t i = 0; i < users.value.size(); ++i) {
    if (trim(users.value[i].description).empty()) continue;
    ++described;
    located += matches[i].has_value();
  }
  std::size_t total_located = 0;
  for (const auto& m : matches) total_located += m.has_value();
  if (described == 0) con.warn("no users with a description; coverage reported as 0");
  const double coverage = described ? 100.0 * static_cast<double>(located) / static_cast<double>(described) : 0.0;
  con.out() << "geolocated: " << total_located << " of " << users.value.size() << " users\n";
  con.out() << "coverage: " << percent(coverage) << " (" << located << "/" << described
            << " users with a description)\n";
  return kExitOk;
}

// ----------------------------------------------------------------------------
// score
// ----------------------------------------------------------------------------

struct ScoreOpts {
  std::string corpus;
  std::string model;
  std::string tweets;
  std::string scores;
  std::string out;
  double threshold = kDefaultBotThreshold;
  std::uint32_t trees = ForestConfig{}.n_trees;
  std::uint32_t max_depth = ForestConfig{}.max_depth;
  std::uint32_t features = 0;
  std::size_t folds = 5;
  double train_fraction = 0.8;

  ForestConfig forest() const { return {trees, max_depth, features}; }
};

std::vector<LabeledExample> corpus_or_throw(const std::string& path, Console& con) {
  auto corpus = load_labeled_corpus(std::filesystem::path(path));
  con.warnings("corpus", corpus.warnings);
  if (corpus.rejected) con.note("rejected rows: " + std::to_string(corpus.rejected));
  if (corpus.examples.empty()) throw InputError("corpus '" + path + "' has no usable rows");
  return std::move(corpus.examples);
}

int score_train(const ScoreOpts& o, const Globals& g, Console& con) {
  const auto data = corpus_or_throw(o.corpus, con);
  const auto model = BaselineModel::train(data, g.seed, o.forest());
  model.save(o.out);
  con.out() << "examples: " << data.size() << ", terms: " << model.vectorizer().vocabulary().size()
            << ", trees: " << model.forest().tree_count() << '\n';
  con.out() << "model hash: " << hex64(model.hash()) << '\n';
  return kExitOk;
}

int score_predict(const ScoreOpts& o, const Globals& g, Console& con) {
  check_threshold(o.threshold, "--threshold");
  const auto model = BaselineModel::load(o.model);
  auto tweets = load_tweets(std::filesystem::path(o.tweets));
  con.warnings("tweets", tweets.stats.warnings);

  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> texts;
  for (const auto& t : tweets.value) {
    auto [it, inserted] = texts.try_emplace(t.user_id);
    if (inserted) order.push_back(t.user_id);
    it->second.push_back(t.text);
  }
  std::vector<double> probs(order.size());
  parallel_for(order.size(), g.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) probs[i] = model.predict_probability(texts.at(order[i]));
  });
  std::vector<BotLabel> labels;
  std::size_t bots = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    labels.push_back(BotLabel::create(order[i], probs[i], o.threshold));
    bots += labels.back().is_bot();
  }
  write_file_atomic(o.out, format_scores(labels));
  con.out() << "scored: " << labels.size() << " users, bots: " << bots << '\n';
  return kExitOk;
}

int score_import(const ScoreOpts& o, Console& con) {
  check_threshold(o.threshold, "--threshold");
  const auto result = import_scores(std::filesystem::path(o.scores), o.threshold);
  con.warnings("scores", result.warnings);
  con.note("rows: " + std::to_string(result.rows) + ", imported: " +
           std::to_string(result.labels.size()) + ", rejected: " + std::to_string(result.rejected) +
           ", duplicates: " + std::to_string(result.duplicates));
  if (!o.out.empty()) write_file_atomic(o.out, format_scores(result.labels));
  std::size_t bots = 0;
  for (const auto& l : result.labels) bots += l.is_bot();
  con.out() << "imported: " << result.labels.size() << " users, bots: " << bots << '\n';
  return kExitOk;
}

int score_evaluate(const ScoreOpts& o, const Globals& g, Console& con) {
  check_threshold(o.threshold, "--threshold");
  const auto data = corpus_or_throw(o.corpus, con);
  const auto classifier = baseline_classifier(o.forest(), o.threshold);
  const auto cv = cross_validate(data, o.folds, g.seed, classifier, g.threads);

  std::vector<Label> labels;
  for (const auto& ex : data) labels.push_back(ex.label);
  const auto split = stratified_split(labels, o.train_fraction, g.seed);
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> test;
  std::vector<Label> truth;
  for (auto i : split.train) train.push_back(data[i]);
  for (auto i : split.test) {
    test.push_back(data[i]);
    truth.push_back(data[i].label);
  }
  const double heldout = f1_score(truth, classifier(train, test, derive_seed(g.seed, "holdout")));

  auto& out = con.out();
  out << "folds: " << o.folds << ", examples: " << data.size() << '\n';
  out << "cv f1 mean: " << format_real(cv.mean_f1) << ", std: " << format_real(cv.std_f1) << '\n';
  out << "cv f1 per fold:";
  for (double f : cv.fold_f1) out << ' ' << format_real(f);
  out << '\n';
  out << "held-out f1: " << format_real(heldout) << " (train " << split.train.size() << ", test "
      << split.test.size() << ")\n";
  return kExitOk;
}

// ----------------------------------------------------------------------------
// analyze
// ----------------------------------------------------------------------------

struct AnalyzeOpts {
  std::string tweets;
  std::string geo;
  std::string scores;
  std::string out;
  std::string dominant;
  std::string indicators;
  std::string regions;
  std::string ignore;
  bool monthly = false;
  bool drop_unlabeled = false;
  double bot_threshold = kDefaultBotThreshold;
  double dominant_threshold = kDefaultDominantThreshold;
  std::size_t top = kDefaultTopLanguages;
  std::size_t top_hashtags = kDefaultTopHashtags;
};

enum class Analysis { Country, Language, Dominant, Regression, Hashtags, All };

struct Months {
  std::vector<std::string> names;
  std::vector<std::vector<TweetRecord>> slices;
};

Months split_months(const std::vector<TweetRecord>& tweets) {
  Months m;
  for (auto& [name, slice] : partition_by_month(tweets)) {
    m.names.push_back(name);
    m.slices.push_back(std::move(slice));
  }
  return m;
}

template <typename Row, typename Fn>
std::vector<std::vector<Row>> per_month(const Months& months, std::size_t threads, Fn&& fn) {
  std::vector<std::vector<Row>> out(months.slices.size());
  parallel_for(months.slices.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = fn(months.slices[i], months.names[i]);
  });
  return out;
}

int analyze(Analysis what, const AnalyzeOpts& o, const Globals& g, Console& con) {
  check_threshold(o.bot_threshold, "--bot-threshold");
  check_threshold(o.dominant_threshold, "--dominant-threshold");
  const bool all = what == Analysis::All;
  const bool need_dominant = all || what == Analysis::Dominant;
  const bool need_indicators = all || what == Analysis::Regression;
  if (need_dominant && o.dominant.empty()) throw CLI::RequiredError("--dominant");
  if (need_indicators && o.indicators.empty()) throw CLI::RequiredError("--indicators");

  auto tweets = load_tweets(std::filesystem::path(o.tweets));
  con.warnings("tweets", tweets.stats.warnings);
  const auto geo = read_geolocations(std::filesystem::path(o.geo));
  auto scores = import_scores(std::filesystem::path(o.scores), o.bot_threshold);
  con.warnings("scores", scores.warnings);
  if (scores.rejected) con.note("rejected score rows: " + std::to_string(scores.rejected));
  const Attribution attr = make_attribution(geo, scores.labels, o.drop_unlabeled);
  const auto& all_tweets = tweets.value;
  const Months months = split_months(all_tweets);
  FileSet files;

  std::vector<CountryMetrics> country_agg;
  if (all || what == Analysis::Country || what == Analysis::Regression) {
    auto monthly = per_month<CountryMetrics>(months, g.threads, [&](const auto& s, const auto& m) {
      return country_bot_metrics(s, attr, m);
    });
    country_agg = aggregate_median(monthly, country_bot_metrics(all_tweets, attr, kAllMonths));
    if (what != Analysis::Regression) {
      files["country_ALL.csv"] = country_csv(country_agg);
      if (o.monthly)
        for (std::size_t i = 0; i < monthly.size(); ++i)
          files["country_" + months.names[i] + ".csv"] = country_csv(monthly[i]);
    }
  }
  if (all || what == Analysis::Language) {
    auto monthly = per_month<LanguageMetrics>(months, g.threads, [&](const auto& s, const auto& m) {
      return language_bot_metrics(s, attr, m);
    });
    const auto agg = aggregate_mean(monthly, language_bot_metrics(all_tweets, attr, kAllMonths));
    files["language_ALL.csv"] = language_csv(top_n(agg, o.top));
    if (o.monthly)
      for (std::size_t i = 0; i < monthly.size(); ++i)
        files["language_" + months.names[i] + ".csv"] = language_csv(top_n(monthly[i], o.top));
  }
  if (need_dominant) {
    auto table = load_dominant_languages(std::filesystem::path(o.dominant));
    con.warnings("dominant languages", table.stats.warnings);
    auto monthly = per_month<DominantLanguageMetrics>(months, g.threads, [&](const auto& s, const auto& m) {
      return dominant_language_fraction(s, attr, table.value, m);
    });
    const auto agg =
        aggregate_mean(monthly, dominant_language_fraction(all_tweets, attr, table.value, kAllMonths));
    files["dominant_language_ALL.csv"] = dominant_csv(agg);
    files["dominant_language_breakdown.csv"] =
        breakdown_csv(under_threshold_breakdown(agg, all_tweets, attr, o.dominant_threshold));
    if (o.monthly)
      for (std::size_t i = 0; i < monthly.size(); ++i)
        files["dominant_language_" + months.names[i] + ".csv"] = dominant_csv(monthly[i]);
  }
  if (need_indicators) {
    auto indicators = load_indicators(std::filesystem::path(o.indicators));
    con.warnings("indicators", indicators.stats.warnings);
    const auto regs = regress_indicators(country_agg, indicators.value);
    files["regression.csv"] = regression_csv(regs);
    for (const auto& r : regs) {
      con.out() << r.indicator << " vs " << r.metric << ": ";
      if (r.result)
        con.out() << "n=" << r.result->n << " slope=" << format_real(r.result->slope)
                  << " intercept=" << format_real(r.result->intercept)
                  << " r2=" << format_real(r.result->r_squared)
                  << (r.result->degenerate ? " (constant response)" : "") << '\n';
      else
        con.out() << "not computed (" << r.note << ")\n";
    }
  }
  if (all || what == Analysis::Hashtags) {
    RegionTable regions = builtin_regions();
    if (!o.regions.empty()) {
      auto loaded = load_regions(std::filesystem::path(o.regions));
      con.warnings("regions", loaded.stats.warnings);
      regions = std::move(loaded.value);
    }
    const HashtagIgnoreList ignore =
        o.ignore.empty() ? builtin_ignore_list() : load_ignore_list(o.ignore);
    files["region_hashtags.csv"] =
        hashtags_csv(region_hashtags(all_tweets, attr, regions, ignore, o.top_hashtags));
  }

  write_files(o.out, files);
  con.out() << "wrote " << files.size() << " file" << (files.size() == 1 ? "" : "s") << " to "
            << o.out << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------------------
// report choropleth
// ----------------------------------------------------------------------------

struct ChoroplethOpts {
  std::string metric;
  std::string out;
  std::string geojson;
  std::string index;
  std::string column = "bot_rate";
  std::string month = std::string(kAllMonths);
};

int report_choropleth(const ChoroplethOpts& o, Console& con) {
  std::optional<GazetteerIndex> index;
  std::set<std::string> known;
  if (!o.index.empty()) {
    index = GazetteerIndex::load(o.index);
    for (const auto& e : index->entries()) known.insert(e.country_iso2);
  }
  auto in = open_input(o.metric);
  CsvReader reader(in);
  CsvRow row;
  if (!reader.next(row)) throw InputError("metric file '" + o.metric + "' is empty");
  const CsvHeader header(row);
  const auto iso_col = header.find("iso2") >= 0 ? header.require("iso2") : header.require("country_iso2");
  const auto value_col = header.require(o.column);
  const auto month_col = header.find("month");

  std::map<std::string, double> values;
  while (reader.next(row)) {
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    const std::string where = "line " + std::to_string(reader.line()) + ": ";
    if (row.size() <= std::max(iso_col, value_col) ||
        (month_col >= 0 && row.size() <= static_cast<std::size_t>(month_col))) {
      con.warn(where + "too few columns, skipped");
      continue;
    }
    if (month_col >= 0 && trim(row[static_cast<std::size_t>(month_col)]) != o.month) continue;
    const std::string iso(trim(row[iso_col]));
    if (!is_iso2(iso) || (index && !known.contains(iso))) {
      con.warn(where + "unknown country '" + iso + "', skipped");
      continue;
    }
    const auto text = trim(row[value_col]);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      con.warn(where + "unparseable value '" + std::string(text) + "', skipped");
      continue;
    }
    if (!values.emplace(iso, v).second) con.warn(where + "duplicate country " + iso + ", first kept");
  }
  std::vector<ChoroplethValue> rows;
  for (const auto& [iso, v] : values) rows.push_back({iso, v});
  // Render both before writing either.
  const std::string csv = choropleth_csv(rows);
  const std::string geo = o.geojson.empty() ? std::string() : choropleth_geojson(rows, index ? &*index : nullptr);
  write_file_atomic(o.out, csv);
  if (!o.geojson.empty()) write_file_atomic(o.geojson, geo);
  con.out() << "countries: " << rows.size() << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("cybergeo");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"Geolocate social-media users from profile descriptions, label bots and compute "
               "per-country, per-language and per-region bot metrics."};
  app.name("cybergeo");
  app.require_subcommand(1);
  app.add_option("--threads", g.threads, "Worker threads for geolocation, scoring and monthly analytics")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}));
  app.add_option("--seed", g.seed, "Master seed for every random stream")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress warnings");

  // gazetteer build
  GazetteerOpts gz;
  auto* gazetteer = app.add_subcommand("gazetteer", "Gazetteer index tools")->require_subcommand(1);
  auto* gz_build = gazetteer->add_subcommand("build", "Import city and country tables into an index");
  gz_build->add_option("--cities", gz.cities, "GeoNames cities dump (tab separated)")->required();
  gz_build->add_option("--countries", gz.countries, "Country CSV: iso2,name,lat,lon[,aliases]")->required();
  gz_build->add_option("--out", gz.out, "Index file to write")->required();

  // geolocate
  GeolocateOpts geo;
  auto* geolocate_cmd = app.add_subcommand("geolocate", "Resolve user descriptions to countries");
  geolocate_cmd->add_option("--users", geo.users, "Users NDJSON")->required();
  geolocate_cmd->add_option("--index", geo.index, "Index built by 'gazetteer build'")->required();
  geolocate_cmd->add_option("--out", geo.out, "Geolocation CSV to write")->required();
  geolocate_cmd->add_option("--threshold", geo.threshold, "Similarity must exceed this")->capture_default_str();
  geolocate_cmd->add_option("--entities", geo.entities,
                            "Entity spans per user (user_id<TAB>span|span...) instead of built-in extraction");
  geolocate_cmd->add_option("--stopwords", geo.stopwords, "Replacement stopword list");

  // score
  ScoreOpts sc;
  auto* score = app.add_subcommand("score", "Bot scoring")->require_subcommand(1);
  auto add_forest = [&](CLI::App* c) {
    c->add_option("--trees", sc.trees, "Trees in the forest")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--max-depth", sc.max_depth, "Maximum tree depth")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--features", sc.features, "Features tried per split (0: square root of the vocabulary)");
  };
  auto* sc_train = score->add_subcommand("train", "Train the TF-IDF + random forest baseline");
  sc_train->add_option("--corpus", sc.corpus, "Labeled CSV: label,language,text")->required();
  sc_train->add_option("--out", sc.out, "Model file to write")->required();
  add_forest(sc_train);
  auto* sc_predict = score->add_subcommand("predict", "Score users from their tweets");
  sc_predict->add_option("--model", sc.model, "Model file")->required();
  sc_predict->add_option("--tweets", sc.tweets, "Tweets NDJSON")->required();
  sc_predict->add_option("--out", sc.out, "Score CSV to write")->required();
  sc_predict->add_option("--threshold", sc.threshold, "Bot iff probability >= threshold")->capture_default_str();
  auto* sc_import = score->add_subcommand("import", "Validate an external score file");
  sc_import->add_option("--scores", sc.scores, "CSV: user_id,bot_probability")->required();
  sc_import->add_option("--out", sc.out, "Write the validated scores here");
  sc_import->add_option("--threshold", sc.threshold, "Bot iff probability >= threshold")->capture_default_str();
  auto* sc_eval = score->add_subcommand("evaluate", "Stratified k-fold CV and held-out F1 of the baseline");
  sc_eval->add_option("--corpus", sc.corpus, "Labeled CSV: label,language,text")->required();
  sc_eval->add_option("--folds", sc.folds, "Number of folds")->capture_default_str()->check(CLI::Range(2, 100));
  sc_eval->add_option("--train-fraction", sc.train_fraction, "Train share of the held-out split")->capture_default_str();
  sc_eval->add_option("--threshold", sc.threshold, "Bot iff probability >= threshold")->capture_default_str();
  add_forest(sc_eval);

  // analyze
  AnalyzeOpts an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute bot metrics")->require_subcommand(1);
  const std::vector<std::pair<std::string, Analysis>> kinds = {
      {"country", Analysis::Country},       {"language", Analysis::Language},
      {"dominant-language", Analysis::Dominant}, {"regression", Analysis::Regression},
      {"hashtags", Analysis::Hashtags},     {"all", Analysis::All}};
  const std::map<Analysis, std::string> blurbs = {
      {Analysis::Country, "Bot rate and share per country, median over months"},
      {Analysis::Language, "Bot rate per tweet language, mean over months, top N"},
      {Analysis::Dominant, "Share of a country's bots tweeting in its dominant languages"},
      {Analysis::Regression, "Regress country bot rate on GDP and population"},
      {Analysis::Hashtags, "Top hashtags of bot tweets per region"},
      {Analysis::All, "Every analysis"}};
  std::vector<std::pair<CLI::App*, Analysis>> analyses;
  for (const auto& [name, kind] : kinds) {
    auto* c = analyze_cmd->add_subcommand(name, blurbs.at(kind));
    c->add_option("--tweets", an.tweets, "Tweets NDJSON")->required();
    c->add_option("--geo", an.geo, "Geolocation CSV from 'geolocate'")->required();
    c->add_option("--scores", an.scores, "Score CSV: user_id,bot_probability")->required();
    c->add_option("--out", an.out, "Output directory")->required();
    c->add_flag("--monthly", an.monthly, "Also write one file per month");
    c->add_flag("--drop-unlabeled", an.drop_unlabeled, "Leave out users without a score instead of counting them as human");
    c->add_option("--bot-threshold", an.bot_threshold, "Bot iff probability >= threshold")->capture_default_str();
    if (kind == Analysis::Language || kind == Analysis::All)
      c->add_option("--top", an.top, "Languages in the ranking")->capture_default_str()->check(CLI::PositiveNumber);
    if (kind == Analysis::Dominant || kind == Analysis::All) {
      c->add_option("--dominant", an.dominant, "Dominant languages CSV: iso2,langs");
      c->add_option("--dominant-threshold", an.dominant_threshold, "Breakdown lists countries below this")
          ->capture_default_str();
    }
    if (kind == Analysis::Regression || kind == Analysis::All)
      c->add_option("--indicators", an.indicators, "Indicators CSV: iso2,gdp_usd,population");
    if (kind == Analysis::Hashtags || kind == Analysis::All) {
      c->add_option("--regions", an.regions, "Region CSV: iso2,region (default: shipped table)");
      c->add_option("--ignore", an.ignore, "Hashtag ignore list (default: shipped list)");
      c->add_option("--top-hashtags", an.top_hashtags, "Hashtags per region")->capture_default_str()
          ->check(CLI::PositiveNumber);
    }
    analyses.emplace_back(c, kind);
  }

  // report
  ChoroplethOpts ch;
  auto* report = app.add_subcommand("report", "Report artifacts")->require_subcommand(1);
  auto* choropleth = report->add_subcommand("choropleth", "Country value map as CSV and GeoJSON");
  choropleth->add_option("--metric", ch.metric, "Metric CSV with an iso2 column")->required();
  choropleth->add_option("--out", ch.out, "iso2,value CSV to write")->required();
  choropleth->add_option("--geojson", ch.geojson, "Also write a GeoJSON FeatureCollection");
  choropleth->add_option("--index", ch.index, "Gazetteer index for country points and code checks");
  choropleth->add_option("--column", ch.column, "Value column")->capture_default_str();
  choropleth->add_option("--month", ch.month, "Rows of this month when a month column exists")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Console con(out, err, g);
  try {
    if (gz_build->parsed()) return gazetteer_build(gz, con);
    if (geolocate_cmd->parsed()) return geolocate(geo, g, con);
    if (sc_train->parsed()) return score_train(sc, g, con);
    if (sc_predict->parsed()) return score_predict(sc, g, con);
    if (sc_import->parsed()) return score_import(sc, con);
    if (sc_eval->parsed()) return score_evaluate(sc, g, con);
    for (const auto& [c, kind] : analyses)
      if (c->parsed()) return analyze(kind, an, g, con);
    if (choropleth->parsed()) return report_choropleth(ch, con);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace cybergeo::cli
