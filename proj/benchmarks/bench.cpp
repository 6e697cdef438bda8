#include <benchmark/benchmark.h>

#include "qrm/circuit.hpp"
#include "qrm/extract.hpp"
#include "qrm/synth.hpp"
#include "qrm/verify.hpp"

namespace {

using namespace qrm;

// Args: r, m.
void BM_RecursiveQrm(benchmark::State& state) {
    const int r = int(state.range(0)), m = int(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(recursive_qrm(r, m));
    state.counters["cnots"] = double(cnot_count(recursive_qrm(r, m).circuit));
}
BENCHMARK(BM_RecursiveQrm)->Args({2, 4})->Args({4, 7})->Args({5, 9})->Args({7, 12})->Unit(benchmark::kMicrosecond);

void BM_RowReduced(benchmark::State& state) {
    const int r = int(state.range(0)), m = int(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(row_reduced_encoder(r, m));
    state.counters["cnots"] = double(cnot_count(row_reduced_encoder(r, m).circuit));
}
BENCHMARK(BM_RowReduced)->Args({2, 4})->Args({4, 7})->Args({5, 9})->Unit(benchmark::kMicrosecond);

void BM_StatePrep(benchmark::State& state) {
    const int rd = int(state.range(0)), md = int(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(stateprep_pzqrm(rd, md, PrepState::Zero));
}
BENCHMARK(BM_StatePrep)->Args({1, 4})->Args({2, 7})->Unit(benchmark::kMicrosecond);

// Tableau simulation of the encoded |0>, scaling with m.
void BM_Tableau(benchmark::State& state) {
    const int m = int(state.range(0)), r = m / 2;
    const auto c = recursive_qrm(r, m).circuit;
    for (auto _ : state) benchmark::DoNotOptimize(tableau_simulate(c, StabilizerTableau(c.width())));
    state.SetComplexityN(std::int64_t{1} << m);
}
BENCHMARK(BM_Tableau)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_ErrorPropDistance(benchmark::State& state) {
    const int m = int(state.range(0)), r = m / 2;
    const auto c = recursive_qrm(r, m).circuit;
    for (auto _ : state) benchmark::DoNotOptimize(error_prop_distance(c));
}
BENCHMARK(BM_ErrorPropDistance)->DenseRange(4, 10, 2)->Unit(benchmark::kMicrosecond);

void BM_Extraction(benchmark::State& state) {
    const int m = int(state.range(0)), r = m / 2, l = int(state.range(1));
    const auto spec = CodeSpec::qrm(r, m);
    const auto enc = synthesize(spec);
    const auto t = tableau_simulate(enc.circuit, StabilizerTableau(enc.circuit.width()));
    const auto plan = build_extraction(spec, l);
    for (auto _ : state) benchmark::DoNotOptimize(run_extraction(plan, t));
}
BENCHMARK(BM_Extraction)->Args({4, 2})->Args({6, 2})->Args({8, 3})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
