#include <benchmark/benchmark.h>

#include <random>

#include "robustq/environments.hpp"
#include "robustq/evaluation.hpp"
#include "robustq/operators.hpp"
#include "robustq/qlearn.hpp"

using namespace robustq;

namespace {

QTable random_qtable(std::mt19937_64& rng, std::size_t nx, std::size_t na) {
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    QTable q(nx, na);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t a = 0; a < na; ++a) q.at(x, a) = dist(rng);
    return q;
}

void BM_ApplyH(benchmark::State& state) {
    const auto problem = build_coin_problem({0.5, 0.6}, 0.95);
    std::mt19937_64 rng(1);
    const auto q = random_qtable(rng, 11, 3);
    for (auto _ : state) benchmark::DoNotOptimize(apply_H(q, problem));
}
BENCHMARK(BM_ApplyH);

void BM_ApplyHWideAmbiguity(benchmark::State& state) {
    std::vector<double> params;
    for (int i = 0; i < state.range(0); ++i)
        params.push_back(0.3 + 0.4 * i / std::max<int>(1, state.range(0) - 1));
    const auto problem = build_coin_problem(params, 0.95);
    std::mt19937_64 rng(1);
    const auto q = random_qtable(rng, 11, 3);
    for (auto _ : state) benchmark::DoNotOptimize(apply_H(q, problem));
}
BENCHMARK(BM_ApplyHWideAmbiguity)->Arg(2)->Arg(5)->Arg(9);

void BM_RobustValueIteration(benchmark::State& state) {
    const auto problem = build_coin_problem({0.5, 0.6}, 0.95);
    for (auto _ : state)
        benchmark::DoNotOptimize(robust_value_iteration(problem, 1e-10));
}
BENCHMARK(BM_RobustValueIteration);

void BM_QLearnSteps(benchmark::State& state) {
    const auto problem = build_coin_problem({0.5, 0.6}, 0.95);
    TrainConfig config;
    config.schedule.kind = LearningRateSchedule::Kind::VisitHarmonic;
    config.policy = BehaviorPolicy::epsilon_greedy(0.1);
    config.iterations = 1;
    TrainState train_state(problem, config);
    for (auto _ : state) benchmark::DoNotOptimize(qlearn_step(train_state, config, problem));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_QLearnSteps);

void BM_TrainCoin(benchmark::State& state) {
    const auto problem = build_coin_problem({0.5, 0.6}, 0.95);
    TrainConfig config;
    config.schedule.kind = LearningRateSchedule::Kind::VisitHarmonic;
    config.policy = BehaviorPolicy::epsilon_greedy(0.1);
    config.iterations = static_cast<std::uint64_t>(state.range(0));
    config.seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(train(config, problem));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainCoin)->Arg(10000)->Arg(100000);

void BM_RolloutCoin(benchmark::State& state) {
    const auto policy =
        PolicyTable::from_bet_values({1, 1, 1, 1, 1, 0, 0, -1, -1, -1, -1});
    for (auto _ : state)
        benchmark::DoNotOptimize(rollout_coin(policy, 0.5, 100000, 1));
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_RolloutCoin);

void BM_ExactProfitOracle(benchmark::State& state) {
    const auto policy =
        PolicyTable::from_bet_values({1, 1, 1, 1, 1, 0, 0, -1, -1, -1, -1});
    for (auto _ : state)
        benchmark::DoNotOptimize(expected_profit_coin(policy, 0.5));
}
BENCHMARK(BM_ExactProfitOracle);

}  // namespace

BENCHMARK_MAIN();
