#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "dalert/cap.hpp"
#include "dalert/push.hpp"

namespace {

void BM_ParseListing(benchmark::State& state) {
  const std::string xml = bench::read_data("listing_plant_disease.xml");
  for (auto _ : state) benchmark::DoNotOptimize(dalert::parse_cap(xml));
}
BENCHMARK(BM_ParseListing);

void BM_SerializeListing(benchmark::State& state) {
  const auto alert = dalert::parse_cap(bench::read_data("listing_plant_disease.xml"));
  for (auto _ : state) benchmark::DoNotOptimize(dalert::serialize_cap(alert));
}
BENCHMARK(BM_SerializeListing);

void BM_ReportRoundTrip(benchmark::State& state) {
  const auto report = dalert::cap_to_report(dalert::parse_cap(bench::read_data("listing_plant_disease.xml")));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dalert::cap_to_report(dalert::parse_cap(dalert::serialize_cap(dalert::report_to_cap(report, "89")))));
  }
}
BENCHMARK(BM_ReportRoundTrip);

void BM_EncodePush(benchmark::State& state) {
  auto report = dalert::cap_to_report(dalert::parse_cap(bench::read_data("listing_plant_disease.xml")));
  report.description = std::string(static_cast<std::size_t>(state.range(0)), 'x');
  dalert::PushMessage m{dalert::Topic::village("BanSangkalok"), 42, dalert::summarize(report, "doc/guide.pdf")};
  for (auto _ : state) benchmark::DoNotOptimize(dalert::encode_push(m));
}
BENCHMARK(BM_EncodePush)->Arg(40)->Arg(4000);

}  // namespace
