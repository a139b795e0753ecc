#include "bratteli/extension.hpp"
#include "bratteli/io.hpp"
#include "bratteli/sampler.hpp"

#include <benchmark/benchmark.h>

using namespace bratteli;

namespace {

ProblemSpec converging() { return parse_spec_file(example_spec("finite-extension")); }

void bm_heights(benchmark::State& state) {
  const IncidenceMatrix m = converging().diagram.incidence(1);
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) {
    // fresh spec per iteration so the height cache does not amortize
    DiagramSpec fresh = DiagramSpec::stationary(m);
    benchmark::DoNotOptimize(fresh.heights(level));
  }
}
BENCHMARK(bm_heights)->Arg(50)->Arg(200);

void bm_stochastic(benchmark::State& state) {
  const IncidenceMatrix m = converging().diagram.incidence(1);
  for (auto _ : state) {
    DiagramSpec fresh = DiagramSpec::stationary(m);
    benchmark::DoNotOptimize(fresh.stochastic(static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_stochastic)->Arg(50)->Arg(200);

void bm_analyze(benchmark::State& state) {
  const ProblemSpec spec = converging();
  const CylinderMeasure mu = build_measure(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        analyze(spec.diagram, *spec.selection, mu, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_analyze)->Arg(20)->Arg(80);

void bm_sample(benchmark::State& state) {
  const ProblemSpec spec = converging();
  const CylinderMeasure mu = build_measure(spec);
  SamplerConfig config;
  config.depth = 10;
  config.count = state.range(0);
  config.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(mu, config));
  }
}
BENCHMARK(bm_sample)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
