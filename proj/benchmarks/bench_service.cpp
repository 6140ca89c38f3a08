#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "dalert/alert_service.hpp"

namespace {

dalert::DisasterReport flood() {
  dalert::DisasterReport r;
  r.kind = dalert::DisasterKind::Flood;
  r.details = dalert::KindDetails::flood(150);
  r.location = {19.845519, 102.078652};
  r.severity = dalert::Severity::Severe;
  r.reporter = "89";
  r.description = "River over the bank";
  return r;
}

void BM_SubmitReport(benchmark::State& state) {
  dalert::AlertService s(bench::north_regions(), bench::north_actors());
  std::uint64_t n = 0;
  for (auto _ : state) benchmark::DoNotOptimize(s.submit_report(flood(), "k" + std::to_string(n++)));
}
BENCHMARK(BM_SubmitReport);

void BM_Replay(benchmark::State& state) {
  dalert::AlertService live(bench::north_regions(), bench::north_actors());
  for (int i = 0; i < state.range(0); ++i) {
    auto id = live.submit_report(flood(), "k" + std::to_string(i));
    live.verify(id, "villager-2");
  }
  auto events = live.events();
  for (auto _ : state) {
    dalert::AlertService copy(bench::north_regions(), bench::north_actors());
    copy.replay(events);
    benchmark::DoNotOptimize(copy.last_seq());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}
BENCHMARK(BM_Replay)->Arg(100);

}  // namespace
