#include <benchmark/benchmark.h>

#include <cmath>

#include "evsim/detector.hpp"
#include "evsim/harness.hpp"
#include "evsim/rng.hpp"
#include "evsim/sources.hpp"
#include "evsim/wave_oracle.hpp"

using namespace evsim;

namespace {

constexpr double kLambda = 670e-9;
constexpr double kPi = 3.141592653589793238462643383279;

void BM_RngUniform(benchmark::State& state) {
    Rng rng(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_RngUniform);

void BM_DetectorUpdateFire(benchmark::State& state) {
    DetectorState det;
    Rng rng(2, 0);
    for (auto _ : state) {
        const double phi = rng.uniform() * 2.0 * kPi;
        det.update({std::cos(phi), std::sin(phi)});
        benchmark::DoNotOptimize(det.fire(rng.uniform()));
    }
}
BENCHMARK(BM_DetectorUpdateFire);

void BM_MessageDoubleSlit(benchmark::State& state) {
    const SourceSpec spec{DoubleSlitSource{kLambda, 5 * kLambda, 0.5 * kPi}, kLambda};
    Rng rng(3, 0);
    for (auto _ : state) benchmark::DoNotOptimize(next_message(spec, 0.05e-3, rng));
}
BENCHMARK(BM_MessageDoubleSlit);

void BM_MessageTwoBeam(benchmark::State& state) {
    const SourceSpec spec{GaussianTwinSource{kLambda, 8 * kLambda, 0.02}, kLambda};
    Rng rng(4, 0);
    for (auto _ : state) benchmark::DoNotOptimize(next_message(spec, 0.1e-3, rng));
}
BENCHMARK(BM_MessageTwoBeam);

void BM_MessageBiprism(benchmark::State& state) {
    const SourceSpec spec{BiprismSource{0.531e-3, 0.0, {kPi / 180.0, 1.5631, 45e-3}}, kLambda};
    Rng rng(5, 0);
    for (auto _ : state) benchmark::DoNotOptimize(next_message(spec, 52e-3, rng));
}
BENCHMARK(BM_MessageBiprism);

void BM_BiprismTrace(benchmark::State& state) {
    const BiprismSpec bp{kPi / 180.0, 1.5631, 45e-3};
    Rng rng(6, 0);
    for (auto _ : state) {
        const double beta = (2.0 * rng.uniform() - 1.0) * 0.5 * bp.summit_angle;
        const double ys = 0.531e-3 * rng.normal();
        benchmark::DoNotOptimize(trace_through_biprism({0.0, ys}, beta, bp, 52e-3));
    }
}
BENCHMARK(BM_BiprismTrace);

void BM_OracleAmplitudeDensity(benchmark::State& state) {
    const BiprismOracle oracle({kPi / 180.0, 1.5631, 45e-3}, 0.531e-3, 0.0, 52e-3, kLambda);
    double y = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle.amplitude_density(y));
        y = std::fmod(y + 17e-6, 400e-6);
    }
}
BENCHMARK(BM_OracleAmplitudeDensity)->Unit(benchmark::kMillisecond);

void BM_HarnessRunTwoBeam(benchmark::State& state) {
    ExperimentConfig cfg = two_beam_config();
    cfg.total_events = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HarnessRunTwoBeam)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
