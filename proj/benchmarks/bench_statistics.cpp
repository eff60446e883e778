#include "mvn/montecarlo.hpp"
#include "mvn/random.hpp"
#include "mvn/test_spec.hpp"

#include <benchmark/benchmark.h>

namespace {

mvn::ScaledResiduals residuals(mvn::Index n, mvn::Index d) {
  mvn::Stream rng(1, 0);
  return mvn::standardize(mvn::Sample(rng.normal_matrix(n, d)));
}

// One benchmark per battery entry; arguments are (n, d).
void BM_Statistic(benchmark::State& state, const std::string& id) {
  const mvn::TestSpec spec = mvn::parse_test(id);
  const mvn::ScaledResiduals y = residuals(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(mvn::evaluate(spec, y).raw);
}

void BM_Standardize(benchmark::State& state) {
  mvn::Stream rng(2, 0);
  const mvn::Sample s(rng.normal_matrix(state.range(0), state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(mvn::standardize(s).rows().data());
}
BENCHMARK(BM_Standardize)->Args({100, 2})->Args({1000, 5});

void BM_SimulateNull(benchmark::State& state) {
  mvn::SimulationConfig c;
  c.test = mvn::parse_test("bhep");
  c.n = 50;
  c.replications = 1000;
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mvn::simulate_null(c).sorted.data());
}
BENCHMARK(BM_SimulateNull)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

const int kRegistered = [] {
  for (const auto& spec : mvn::default_battery()) {
    auto* b = benchmark::RegisterBenchmark(("BM_Statistic/" + spec.id()).c_str(), BM_Statistic, spec.id());
    b->Args({20, 2})->Args({100, 2})->Args({100, 5})->Unit(benchmark::kMicrosecond);
  }
  return 0;
}();

}  // namespace

BENCHMARK_MAIN();
