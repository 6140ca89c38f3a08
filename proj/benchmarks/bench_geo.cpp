#include <benchmark/benchmark.h>

#include <random>

#include "bench_data.hpp"
#include "dalert/routing.hpp"

namespace {

std::vector<dalert::GeoPoint> points(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(14.0, 18.0), lon(100.0, 107.5);
  std::vector<dalert::GeoPoint> out(n);
  for (auto& p : out) p = {lat(rng), lon(rng)};
  return out;
}

void BM_Locate(benchmark::State& state) {
  auto h = bench::grid(17, static_cast<int>(state.range(0)), 3);
  auto pts = points(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(h.try_locate(pts[i++ & 1023]));
}
BENCHMARK(BM_Locate)->Arg(1)->Arg(10);

void BM_Neighbors(benchmark::State& state) {
  auto h = bench::grid(17, 10, static_cast<int>(state.range(0)));
  auto pts = points(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(h.neighbors(pts[i++ & 1023], 10000));
}
BENCHMARK(BM_Neighbors)->Arg(3)->Arg(30);

void BM_NotificationSet(benchmark::State& state) {
  auto h = bench::north_regions();
  auto d = bench::north_actors();
  dalert::DisasterReport r;
  r.kind = dalert::DisasterKind::Flood;
  r.details = dalert::KindDetails::flood(150);
  r.location = {19.845519, 102.078652};
  r.province_id = "Louangphabang";
  r.district_id = "Louangprabang";
  r.severity = dalert::Severity::Severe;
  for (auto _ : state) benchmark::DoNotOptimize(dalert::notification_set(r, h, d, 10000));
}
BENCHMARK(BM_NotificationSet);

}  // namespace
