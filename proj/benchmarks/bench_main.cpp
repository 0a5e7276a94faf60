#include <benchmark/benchmark.h>

#include "tsnsim/egress_port.hpp"
#include "tsnsim/event_loop.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/orchestrator.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/stats.hpp"
#include "tsnsim/switch_model.hpp"

using namespace tsnsim;

static void BM_EventLoopChain(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    EventLoop loop;
    std::int64_t fired = 0;
    std::function<void()> tick = [&] {
      if (++fired < n) loop.schedule_in(100, tick);
    };
    loop.schedule(SimTime{0}, tick);
    loop.run_until(SimTime::max());
    benchmark::DoNotOptimize(fired);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventLoopChain)->Arg(100'000);

// Many outstanding events: heap depth dominates.
static void BM_EventLoopWide(benchmark::State& state) {
  const auto n = state.range(0);
  Rng rng(3, "bench");
  std::vector<std::int64_t> times(static_cast<std::size_t>(n));
  for (auto& t : times) t = rng.uniform_int(0, 1'000'000'000);
  for (auto _ : state) {
    EventLoop loop;
    std::int64_t sum = 0;
    for (auto t : times) loop.schedule(SimTime{t}, [&sum, t] { sum += t; });
    loop.run_until(SimTime::max());
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventLoopWide)->Arg(100'000);

static void BM_EgressSelection(benchmark::State& state) {
  const auto sel = static_cast<SelectionPolicy>(state.range(0));
  EgressConfig cfg;
  cfg.selection = sel;
  cfg.shared_buffer_bytes = 1'000'000'000;
  cfg.buffer_alpha = 0;
  if (sel == SelectionPolicy::Tas) cfg.gcl = make_gcl(4, 15'000, true);
  Rng rng(5, "bench-egress");
  std::int64_t t = 0;
  std::uint64_t uid = 0;
  EgressPort port(cfg);
  for (auto _ : state) {
    // keep the queues populated: two arrivals per selection attempt
    for (int k = 0; k < 2; ++k) {
      Frame f;
      f.uid = uid++;
      f.pcp = static_cast<int>(rng.uniform_int(0, 7));
      f.on_wire_bytes = rng.uniform_int(64, 1522);
      port.enqueue(f, SimTime{t});
    }
    const auto s = port.select_next(SimTime{t});
    t = s.frame ? s.end.ns : std::max(t + 1, std::min(s.idle_until.ns, t + 100'000));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_EgressSelection)->Arg(0)->Arg(1)->Arg(2);

static void BM_GateState(benchmark::State& state) {
  const Gcl gcl = make_gcl(4, 15'000, true);
  std::int64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gcl.gate_state(SimTime{t}));
    t += 7'919;
  }
}
BENCHMARK(BM_GateState);

static void BM_SummaryStats(benchmark::State& state) {
  Rng rng(7, "bench-stats");
  std::vector<std::int64_t> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = rng.uniform_int(4'000, 100'000);
  for (auto _ : state) benchmark::DoNotOptimize(summary_stats(v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SummaryStats)->Arg(50'000);

// One second of the SPQ scenario with 2 Gb/s cross traffic, after a short warm-up.
static void BM_ShortScenario(benchmark::State& state) {
  ScenarioConfig c = bundled_scenario("generic-ct-spq");
  c.duration_s = 1.0;
  c.ptp.warmup_s = 2.0;
  std::uint64_t events = 0;
  for (auto _ : state) {
    const RunResult r = run_scenario(c);
    events += r.events;
    benchmark::DoNotOptimize(r.streams.size());
  }
  state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_ShortScenario)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
