#include <benchmark/benchmark.h>

#include "enclosure/indicator.hpp"
#include "enclosure/reconstruct.hpp"

using namespace enclosure;

namespace {

MaterialConfig inclusion_material() {
    MaterialConfig mat;
    mat.lambda0 = 2.0;
    mat.mu0 = 1.0;
    mat.k = 1.0;
    mat.inclusions.push_back({DiscShape{{3.0, 0.2}, 0.3}, 0.0, 2.0});
    return mat;
}

double mesh_size(int level) { return 0.16 / double(1 << level); }

void BM_GenerateMesh(benchmark::State& state) {
    const MaterialConfig mat = inclusion_material();
    const DomainSpec domain{{3.0, 0.0}, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_mesh(domain, mat, mesh_size(int(state.range(0)))));
}
BENCHMARK(BM_GenerateMesh)->Arg(0)->Arg(1)->Arg(2);

void BM_Assemble(benchmark::State& state) {
    const MaterialConfig mat = inclusion_material();
    const Mesh mesh = generate_mesh({{3.0, 0.0}, 1.0}, mat, mesh_size(int(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble(mesh, mat, CoefficientSet::Full));
    state.counters["triangles"] = double(mesh.triangle_count());
}
BENCHMARK(BM_Assemble)->Arg(0)->Arg(1)->Arg(2);

void BM_Factorize(benchmark::State& state) {
    const MaterialConfig mat = inclusion_material();
    const Mesh mesh = generate_mesh({{3.0, 0.0}, 1.0}, mat, mesh_size(int(state.range(0))));
    const FemSystem sys = assemble(mesh, mat, CoefficientSet::Full);
    for (auto _ : state) {
        DirichletSolver solver(mesh, sys);
        benchmark::DoNotOptimize(solver.condition_estimate());
    }
}
BENCHMARK(BM_Factorize)->Arg(0)->Arg(1)->Arg(2);

void BM_IndicatorSample(benchmark::State& state) {
    const MaterialConfig mat = inclusion_material();
    const Mesh mesh = generate_mesh({{3.0, 0.0}, 1.0}, mat, mesh_size(int(state.range(0))));
    const IndicatorContext ctx(mesh, mat);
    const WaveNumbers waves = WaveNumbers::from_material(mat);
    ProbeParams params;
    params.d = 0.32;
    params.h = 0.1;
    params.epsBand = 0.1;
    const ConeFrame frame{{0, 0}, 1, 0.0};
    const BoundaryField f = probe_trace(frame, waves, params, mesh);
    for (auto _ : state) benchmark::DoNotOptimize(ctx.evaluate(f, params.d, params.h));
}
BENCHMARK(BM_IndicatorSample)->Arg(0)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
