#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "robustq/environments.hpp"
#include "robustq/types.hpp"

namespace robustq {

/// Per-state action index, with the action labels it indexes into.
struct PolicyTable {
    std::vector<std::size_t> actions;

    /// Builds from action values in {-1, 0, +1} assuming the standard bet
    /// action ordering [-1, 0, +1].
    static PolicyTable from_bet_values(const std::vector<int>& values);
    /// Action value at state x under the standard bet ordering.
    int bet_value(std::size_t x) const;
};

struct ProfitReport {
    std::uint64_t rounds = 0;
    double cumulative_profit = 0.0;
    double per_round_mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t seed = 0;
};

struct BacktestReport {
    std::uint64_t trades = 0;
    double mean_reward_per_trade = 0.0;
    double cumulative_reward = 0.0;
    std::string period_label;
};

/// Simulates `rounds` plays of the coin-toss game against Bin(10, p_true):
/// consecutive i.i.d. sums, reward coin_reward(X_t, policy[X_t], X_{t+1}).
ProfitReport rollout_coin(const PolicyTable& policy, double p_true, std::uint64_t rounds,
                          std::uint64_t seed);

/// Exact per-round expected profit: sum over (x, x') of pmf(x) pmf(x') r(x, a(x), x').
double expected_profit_coin(const PolicyTable& policy, double p_true);

/// Deterministic replay over a sign series: at each t >= h the state is the
/// last h signs, the reward is action value times the next sign.
BacktestReport backtest(const PolicyTable& policy, const ReturnSeries& series,
                        std::size_t h);

/// Trend following: always act on the sign of the newest return.
PolicyTable trend_following_policy(std::size_t h);
/// Buy and hold: always +1.
PolicyTable buy_and_hold_policy(std::size_t num_states);

struct ComparisonTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<double>> values;  // [row][column]
    std::vector<std::vector<bool>> best;      // ties are all marked
};

using PolicyEvaluator = std::function<double(const PolicyTable&)>;

/// Applies each labeled evaluator column to each labeled policy row and marks
/// the best (maximal) cell per column; exact ties are all marked.
ComparisonTable compare_policies(
    const std::vector<std::pair<std::string, PolicyTable>>& policies,
    const std::vector<std::pair<std::string, PolicyEvaluator>>& evaluators);

}  // namespace robustq
