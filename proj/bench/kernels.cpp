// Serial reference vs OpenMP kernels. Thread count: SEEDSEG_THREADS or the OpenMP default.

#include <benchmark/benchmark.h>

#include "seedseg/assembler.hpp"
#include "seedseg/edgemap.hpp"
#include "seedseg/engine.hpp"
#include "seedseg/parallel.hpp"

using namespace seedseg;

namespace {

struct Scene {
    GridSpec spec;
    GridField field;
    MollifierParams mollifier;
    EdgeMap em;
    GridField u;
    double tau;
};

Scene makeScene(int pixels) {
    const GridSpec s = gridForImage(pixels, pixels);
    const SegmentationParams p;
    GridField f = imageToField(synthTwoRectanglesImage(SceneParams{}, pixels, pixels), s);
    const MollifierParams m{p.sigmaFor(s), p.truncationRadius};
    EdgeMap em = buildEdgeMap(f, m, p.edgeStop);
    return {s, std::move(f), m, std::move(em), initialCircle({0.5, 0.5}, 0.28, s), p.tauFor(s)};
}

void BM_ConvolutionSerial(benchmark::State& st) {
    const Scene sc = makeScene(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(smoothedGradientSerial(sc.field, sc.mollifier));
}

void BM_ConvolutionParallel(benchmark::State& st) {
    const Scene sc = makeScene(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(smoothedGradient(sc.field, sc.mollifier));
}

void BM_AssemblySerial(benchmark::State& st) {
    const Scene sc = makeScene(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assembleSerial(sc.u, sc.em, sc.tau, 1e-4));
}

void BM_AssemblyParallel(benchmark::State& st) {
    const Scene sc = makeScene(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(assemble(sc.u, sc.em, sc.tau, 1e-4));
}

}  // namespace

BENCHMARK(BM_ConvolutionSerial)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolutionParallel)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssemblySerial)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssemblyParallel)->Arg(128)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    applyThreadEnv();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
