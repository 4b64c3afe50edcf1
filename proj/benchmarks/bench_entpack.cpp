#include <benchmark/benchmark.h>

#include <memory>

#include "entpack/entpack.hpp"

using namespace entpack;

namespace {

std::shared_ptr<const TransitionTable> far_table(int n, bool reduced) {
    return build_table(far_term(), n, reduced);
}

void BM_Enumerate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(StateSpace::enumerate(n, 11, false).size());
    state.SetLabel("far-term t_max=11");
}
BENCHMARK(BM_Enumerate)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_BuildTable(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(far_table(n, false)->num_rows());
}
BENCHMARK(BM_BuildTable)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_EvaluateDirect(benchmark::State& state) {
    const auto table = far_table(static_cast<int>(state.range(0)), false);
    const Policy h = heuristic_policy(table->space(), table->actions(), 9);
    EvalOptions opts;
    opts.method = EvalMethod::direct;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_policy(h, *table, opts).empty_state());
    state.counters["states"] = static_cast<double>(table->num_states());
}
BENCHMARK(BM_EvaluateDirect)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_EvaluateJacobi(benchmark::State& state) {
    const auto table = far_table(static_cast<int>(state.range(0)), false);
    const Policy h = heuristic_policy(table->space(), table->actions(), 9);
    EvalOptions opts;
    opts.method = EvalMethod::jacobi;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_policy(h, *table, opts).empty_state());
}
BENCHMARK(BM_EvaluateJacobi)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_PolicyIteration(benchmark::State& state) {
    const auto table = far_table(static_cast<int>(state.range(0)), state.range(1) != 0);
    for (auto _ : state) benchmark::DoNotOptimize(policy_iteration(*table).values.empty_state());
    state.counters["states"] = static_cast<double>(table->num_states());
}
BENCHMARK(BM_PolicyIteration)->Args({5, 0})->Args({7, 0})->Args({7, 1})->Unit(benchmark::kMillisecond);

void BM_SimulateHeuristic(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ActionSpace actions = build_action_space(far_term().params(n));
    const HeuristicRule rule(n, actions, 9);
    SimOptions opts;
    opts.workers = 1;
    std::int64_t steps = 0;
    for (auto _ : state) {
        const SimResult r = estimate(rule, actions, n, 10'000, 1, opts);
        steps += static_cast<std::int64_t>(r.mean * static_cast<double>(r.episodes));
    }
    state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateHeuristic)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
