#include <benchmark/benchmark.h>

#include <cmath>

#include "vrvi/bellman.hpp"
#include "vrvi/generate.hpp"
#include "vrvi/kernel.hpp"
#include "vrvi/sampler.hpp"
#include "vrvi/solvers.hpp"

namespace {

using namespace vrvi;

Dmdp instance(std::size_t states, std::size_t actions, double discount) {
    GeneratorSpec spec;
    spec.num_states = states;
    spec.num_actions = actions;
    spec.discount = discount;
    spec.seed = 42;
    return generate(spec);
}

ValueVector wave(std::size_t n) {
    ValueVector u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = std::sin(static_cast<double>(j));
    return u;
}

void BM_AliasDraw(benchmark::State& state) {
    const Dmdp d = instance(static_cast<std::size_t>(state.range(0)), 1, 0.9);
    const TransitionSampler sampler = build_sampler(d);
    RngStream rng(1, {0, 0, 0});
    for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(0, 0, rng));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AliasDraw)->Arg(8)->Arg(256)->Arg(4096);

void BM_ApxTrans(benchmark::State& state) {
    const Dmdp d = instance(64, 1, 0.9);
    const TransitionSampler sampler = build_sampler(d);
    const ValueVector u = wave(64);
    const auto mode = state.range(0) ? SamplingMode::multinomial : SamplingMode::per_draw;
    std::uint64_t round = 0;
    SampleTally tally;
    for (auto _ : state) {
        RngStream rng(1, {round++, 0, 0});
        benchmark::DoNotOptimize(apx_trans(u, 1.0, 0, 0, 0.01, 0.1, sampler, rng, &tally, mode));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(tally.total()));
    state.SetLabel(state.range(0) ? "multinomial" : "per-draw");
}
BENCHMARK(BM_ApxTrans)->Arg(0)->Arg(1);

void BM_ValueOperator(benchmark::State& state) {
    const Dmdp d = instance(static_cast<std::size_t>(state.range(0)), 4, 0.9);
    const ValueVector u = wave(d.num_states());
    for (auto _ : state) benchmark::DoNotOptimize(value_operator(d, u));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.num_pairs()));
}
BENCHMARK(BM_ValueOperator)->Arg(30)->Arg(300);

void BM_ApxVal(benchmark::State& state) {
    const Dmdp d = instance(30, 4, 0.9);
    const TransitionSampler sampler = build_sampler(d);
    const ValueVector v0(30, 0.0);
    const ValueVector u = wave(30);
    const OffsetTable x = exact_offsets(d, v0);
    SamplingContext ctx{sampler, 7, SampleTally{}, SamplingMode::multinomial};
    std::uint64_t round = 0;
    for (auto _ : state) benchmark::DoNotOptimize(apx_val(d, u, v0, x, 0.01, 0.1, ctx, round++));
    state.SetItemsProcessed(static_cast<std::int64_t>(ctx.tally.total()));
}
BENCHMARK(BM_ApxVal);

// Whole solver runs. Reports samples per phase so the phase balance of the
// halving schedule can be inspected: max_phase_ratio compares the largest and
// smallest phase after the first.
template <SolveReport (*Solver)(const Dmdp&, const SolveConfig&)>
void BM_Solver(benchmark::State& state) {
    const Dmdp d = instance(30, 4, 0.9);
    SolveConfig c;
    c.epsilon = 0.1;
    c.run.sampling = SamplingMode::multinomial;
    SolveReport r;
    for (auto _ : state) {
        r = Solver(d, c);
        benchmark::DoNotOptimize(r.values.data());
    }
    state.counters["samples"] = static_cast<double>(r.total_samples);
    state.counters["phases"] = static_cast<double>(r.phases);
    for (std::size_t k = 0; k < r.phase_samples.size(); ++k)
        state.counters["phase" + std::to_string(k + 1)] = static_cast<double>(r.phase_samples[k]);
    if (r.phase_samples.size() > 2) {
        double lo = INFINITY, hi = 0.0;
        for (std::size_t k = 1; k < r.phase_samples.size(); ++k) {
            lo = std::min(lo, static_cast<double>(r.phase_samples[k]));
            hi = std::max(hi, static_cast<double>(r.phase_samples[k]));
        }
        state.counters["max_phase_ratio"] = lo > 0.0 ? hi / lo : 0.0;
    }
}
BENCHMARK(BM_Solver<high_precision_random_vi>)->Name("BM_HighPrecision")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solver<sublinear_random_vi>)->Name("BM_Sublinear")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solver<sublinear_random_mon_vi>)->Name("BM_SublinearMon")->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
