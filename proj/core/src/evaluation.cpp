#include "robustq/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "robustq/qlearn.hpp"

namespace robustq {

namespace {

std::size_t bet_index(int value) {
    switch (value) {
        case -1: return 0;
        case 0: return 1;
        case 1: return 2;
    }
    throw std::invalid_argument("bet value must be -1, 0 or +1");
}

}  // namespace

PolicyTable PolicyTable::from_bet_values(const std::vector<int>& values) {
    PolicyTable table;
    table.actions.reserve(values.size());
    for (int v : values) table.actions.push_back(bet_index(v));
    return table;
}

int PolicyTable::bet_value(std::size_t x) const {
    static constexpr int kValues[3] = {-1, 0, 1};
    const std::size_t a = actions.at(x);
    if (a > 2) throw std::invalid_argument("action index is not a bet action");
    return kValues[a];
}

ProfitReport rollout_coin(const PolicyTable& policy, double p_true, std::uint64_t rounds,
                          std::uint64_t seed) {
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (policy.actions.size() != 11)
        throw std::invalid_argument("coin policy must cover states 0..10");
    const Categorical pmf = binomial_pmf({10, p_true});

    std::mt19937_64 rng(seed);
    ProfitReport report;
    report.rounds = rounds;
    report.seed = seed;

    double sum = 0.0, sum_sq = 0.0;
    std::size_t x = pmf.sample(uniform01(rng));
    for (std::uint64_t t = 0; t < rounds; ++t) {
        const std::size_t xp = pmf.sample(uniform01(rng));
        const int a = policy.bet_value(x);
        const double reward =
            coin_reward(static_cast<int>(x), a, static_cast<int>(xp));
        sum += reward;
        sum_sq += reward * reward;
        x = xp;
    }
    report.cumulative_profit = sum;
    report.per_round_mean = sum / static_cast<double>(rounds);
    const double n = static_cast<double>(rounds);
    const double var = rounds > 1 ? (sum_sq - sum * sum / n) / (n - 1.0) : 0.0;
    report.standard_error = std::sqrt(std::max(0.0, var) / n);
    return report;
}

double expected_profit_coin(const PolicyTable& policy, double p_true) {
    if (policy.actions.size() != 11)
        throw std::invalid_argument("coin policy must cover states 0..10");
    const Categorical pmf = binomial_pmf({10, p_true});
    double total = 0.0;
    for (std::size_t x = 0; x < 11; ++x) {
        const int a = policy.bet_value(x);
        if (a == 0) continue;
        for (std::size_t xp = 0; xp < 11; ++xp) {
            total += pmf[x] * pmf[xp] *
                     coin_reward(static_cast<int>(x), a, static_cast<int>(xp));
        }
    }
    return total;
}

BacktestReport backtest(const PolicyTable& policy, const ReturnSeries& series,
                        std::size_t h) {
    if (series.signs.size() <= h)
        throw std::invalid_argument("series must be longer than the window length");
    const std::size_t num_states = std::size_t{1} << h;
    if (policy.actions.size() != num_states)
        throw std::invalid_argument("policy must cover all 2^h states");

    BacktestReport report;
    report.period_label = series.date_range;
    double sum = 0.0;
    std::size_t state = 0;
    for (std::size_t j = 0; j < h; ++j)
        state = (state << 1) | (series.signs[j] > 0 ? 1u : 0u);
    const std::size_t full_mask = num_states - 1;
    for (std::size_t t = h; t < series.signs.size(); ++t) {
        const int a = policy.bet_value(state);
        sum += a * series.signs[t];
        state = ((state << 1) & full_mask) | (series.signs[t] > 0 ? 1u : 0u);
        ++report.trades;
    }
    report.cumulative_reward = sum;
    report.mean_reward_per_trade = sum / static_cast<double>(report.trades);
    return report;
}

PolicyTable trend_following_policy(std::size_t h) {
    const std::size_t num_states = std::size_t{1} << h;
    PolicyTable table;
    table.actions.reserve(num_states);
    for (std::size_t x = 0; x < num_states; ++x)
        table.actions.push_back(bet_index((x & 1u) ? 1 : -1));
    return table;
}

PolicyTable buy_and_hold_policy(std::size_t num_states) {
    PolicyTable table;
    table.actions.assign(num_states, bet_index(1));
    return table;
}

ComparisonTable compare_policies(
    const std::vector<std::pair<std::string, PolicyTable>>& policies,
    const std::vector<std::pair<std::string, PolicyEvaluator>>& evaluators) {
    ComparisonTable table;
    for (const auto& [label, _] : policies) table.row_labels.push_back(label);
    for (const auto& [label, _] : evaluators) table.column_labels.push_back(label);
    table.values.assign(policies.size(), std::vector<double>(evaluators.size(), 0.0));
    table.best.assign(policies.size(), std::vector<bool>(evaluators.size(), false));
    for (std::size_t r = 0; r < policies.size(); ++r) {
        for (std::size_t c = 0; c < evaluators.size(); ++c) {
            table.values[r][c] = evaluators[c].second(policies[r].second);
        }
    }
    for (std::size_t c = 0; c < evaluators.size(); ++c) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < policies.size(); ++r)
            best = std::max(best, table.values[r][c]);
        for (std::size_t r = 0; r < policies.size(); ++r)
            table.best[r][c] = table.values[r][c] == best;
    }
    return table;
}

}  // namespace robustq
