#include <benchmark/benchmark.h>

#include "fivreg/calibrate.hpp"
#include "fivreg/driver.hpp"
#include "fivreg/regress.hpp"
#include "fivreg/simgen.hpp"

using namespace fivreg;

namespace {

SimulatedDataset dataset(int n, int grid_size) {
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.grid_size = grid_size;
  Rng rng(cfg.seed, 0);
  return generate_scenario(cfg, rng);
}

}  // namespace

static void BM_GenerateScenario(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.grid_size = 101;
  for (auto _ : state) {
    Rng rng(cfg.seed, 0);
    benchmark::DoNotOptimize(generate_scenario(cfg, rng));
  }
}
BENCHMARK(BM_GenerateScenario)->Arg(100)->Arg(500);

static void BM_SampleGp(benchmark::State& state) {
  Grid g = make_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Rng rng(1, 0);
    benchmark::DoNotOptimize(sample_gp_sqexp(200, 0.1, 0.05, g, rng));
  }
}
BENCHMARK(BM_SampleGp)->Arg(51)->Arg(101);

static void BM_FitConcurrent(benchmark::State& state) {
  SimulatedDataset data = dataset(static_cast<int>(state.range(0)), 101);
  auto basis = BasisSystem::bspline(6, data.w.grid());
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_concurrent(data.w, data.z, basis));
  }
}
BENCHMARK(BM_FitConcurrent)->Arg(100)->Arg(500)->Arg(2000);

static void BM_Fpca(benchmark::State& state) {
  SimulatedDataset data = dataset(static_cast<int>(state.range(0)), 101);
  CalibrationFit cal = fit_concurrent(data.w, data.z, BasisSystem::bspline(6, data.w.grid()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpca(cal.vhat, 5));
  }
}
BENCHMARK(BM_Fpca)->Arg(100)->Arg(500)->Arg(2000);

static void BM_SecondStage(benchmark::State& state) {
  SimulatedDataset data = dataset(static_cast<int>(state.range(0)), 101);
  CalibrationFit cal = fit_concurrent(data.w, data.z, BasisSystem::bspline(6, data.w.grid()));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_calibrated(data.y, cal.vhat, 3));
  }
}
BENCHMARK(BM_SecondStage)->Arg(100)->Arg(500)->Arg(2000);

static void BM_GcvSmoothing(benchmark::State& state) {
  SimulatedDataset data = dataset(100, static_cast<int>(state.range(0)));
  CurvePanel panel(data.w.grid(), data.w.values());
  auto basis = BasisSystem::bspline(15, data.w.grid());
  for (auto _ : state) {
    benchmark::DoNotOptimize(choose_lambda_gcv(panel, *basis));
  }
}
BENCHMARK(BM_GcvSmoothing)->Arg(51)->Arg(101);

static void BM_FullReplicate(benchmark::State& state) {
  ScenarioConfig cfg;
  cfg.n = static_cast<int>(state.range(0));
  cfg.grid_size = 101;
  SimulateOptions opt;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_replicate(cfg, 0, opt));
  }
}
BENCHMARK(BM_FullReplicate)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
