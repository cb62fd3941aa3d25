#include <benchmark/benchmark.h>

#include "enclosure/bessel.hpp"
#include "enclosure/cgo.hpp"

using namespace enclosure;

namespace {

MaterialConfig reference_material() {
    MaterialConfig mat;
    mat.lambda0 = 2.0;
    mat.mu0 = 1.0;
    mat.k = 1.0;
    return mat;
}

void BM_BesselJ0(benchmark::State& state) {
    const double z = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bessel_j(0, z));
}
BENCHMARK(BM_BesselJ0)->Arg(1)->Arg(10)->Arg(30)->Arg(100);

void BM_RemainderR(benchmark::State& state) {
    const ConeFrame frame{{0, 0}, int(state.range(0)), 0.0};
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const Point x{3.1, 0.2};
    for (auto _ : state)
        benchmark::DoNotOptimize(remainder_R(frame, waves.k2, 0.1, x, 48));
}
BENCHMARK(BM_RemainderR)->Arg(1)->Arg(2);

void BM_CgoField(benchmark::State& state) {
    const ConeFrame frame{{0, 0}, int(state.range(0)), 0.0};
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    const Point x{3.1, 0.2};
    for (auto _ : state) benchmark::DoNotOptimize(cgo_field(frame, waves, 0.1, x, 48));
}
BENCHMARK(BM_CgoField)->Arg(1)->Arg(2);

void BM_Probe(benchmark::State& state) {
    const ConeFrame frame{{0, 0}, 1, 0.0};
    const WaveNumbers waves = WaveNumbers::from_material(reference_material());
    ProbeParams params;
    params.d = 0.3;
    params.h = 1.0 / double(state.range(0));
    params.epsBand = 0.1;
    const Point x{3.6, 0.2};
    for (auto _ : state) benchmark::DoNotOptimize(probe(frame, waves, params, x));
}
BENCHMARK(BM_Probe)->Arg(5)->Arg(10)->Arg(20);

}  // namespace
