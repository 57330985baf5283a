#include <benchmark/benchmark.h>

#include "cybergeo/gazetteer.hpp"
#include "cybergeo/geolocate.hpp"
#include "cybergeo/similarity.hpp"
#include "cybergeo/text.hpp"
#include "generators.hpp"

using namespace cybergeo;

namespace {

const std::vector<GazetteerEntry>& entries() {
  static const auto e = [] {
    Rng rng(7);
    return gen::gazetteer(rng, 100'000, 200);
  }();
  return e;
}

const GazetteerIndex& index() {
  static const auto i = GazetteerIndex::build(entries());
  return i;
}

std::vector<PreparedQuery> queries(std::size_t n) {
  Rng rng(8);
  std::vector<PreparedQuery> q;
  for (std::size_t i = 0; i < n; ++i) q.push_back(PreparedQuery::from_utf8(normalize_name(gen::near_query(rng, entries()))));
  return q;
}

void BM_Similarity(benchmark::State& state) {
  Rng rng(1);
  const auto len = static_cast<std::size_t>(state.range(0));
  std::vector<std::pair<std::u32string, std::u32string>> pairs;
  for (int i = 0; i < 256; ++i) {
    auto a = gen::u32_string(rng, len);
    a.resize(len, U'x');
    pairs.emplace_back(a, gen::mutate(rng, a, 3));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ & 255];
    benchmark::DoNotOptimize(similarity(a, b));
  }
}
BENCHMARK(BM_Similarity)->Arg(8)->Arg(16)->Arg(40)->Arg(64)->Arg(200);

void BM_LookupPruned(benchmark::State& state) {
  const auto& idx = index();
  const auto q = queries(512);
  const auto cls = static_cast<MatchClass>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(idx.best_match(cls, q[i++ & 511]));
}
BENCHMARK(BM_LookupPruned)
    ->Arg(static_cast<int>(MatchClass::CityCountryPair))
    ->Arg(static_cast<int>(MatchClass::Country))
    ->Arg(static_cast<int>(MatchClass::City));

void BM_LookupFullScan(benchmark::State& state) {
  const auto& idx = index();
  const auto q = queries(64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(idx.best_match_full_scan(MatchClass::City, q[i++ & 63]));
}
BENCHMARK(BM_LookupFullScan)->Unit(benchmark::kMillisecond);

void BM_Extract(benchmark::State& state) {
  Rng rng(9);
  std::vector<std::string> d;
  for (int i = 0; i < 256; ++i) d.push_back(gen::description(rng, entries()));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(extract_candidates(d[i++ & 255]));
}
BENCHMARK(BM_Extract);

void BM_Geolocate(benchmark::State& state) {
  const auto& idx = index();
  Rng rng(10);
  std::vector<UserRecord> users;
  for (int i = 0; i < 2000; ++i)
    users.push_back({"u" + std::to_string(i), gen::description(rng, entries()) + " #" + std::to_string(i), {}});
  const auto threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(geolocate_users(users, idx, {}, threads));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * users.size()));
}
BENCHMARK(BM_Geolocate)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
