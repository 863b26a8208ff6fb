#include <doctest.h>

#include <cmath>

#include "robustq/evaluation.hpp"

using namespace robustq;

namespace {

PolicyTable table1_p1() {
    return PolicyTable::from_bet_values({1, 1, 1, 1, 1, 0, 0, -1, -1, -1, -1});
}

PolicyTable never_play() { return PolicyTable::from_bet_values(std::vector<int>(11, 0)); }

}  // namespace

TEST_CASE("policy table bet conversion") {
    const auto policy = table1_p1();
    CHECK(policy.actions[0] == 2);
    CHECK(policy.actions[5] == 1);
    CHECK(policy.actions[10] == 0);
    CHECK(policy.bet_value(0) == 1);
    CHECK(policy.bet_value(10) == -1);
    CHECK_THROWS_AS(PolicyTable::from_bet_values({2}), std::invalid_argument);
}

TEST_CASE("rollout of the never-play policy is exactly zero") {
    const auto report = rollout_coin(never_play(), 0.4, 1000, 1);
    CHECK(report.cumulative_profit == 0.0);
    CHECK(report.per_round_mean == 0.0);
    CHECK(report.standard_error == 0.0);
    CHECK(report.rounds == 1000);
}

TEST_CASE("single-round rollout pays a single reward") {
    const auto report = rollout_coin(table1_p1(), 0.5, 1, 42);
    CHECK(std::abs(report.cumulative_profit) <= 1.0);
    CHECK(report.per_round_mean == report.cumulative_profit);
}

TEST_CASE("rollout is deterministic per seed") {
    const auto a = rollout_coin(table1_p1(), 0.6, 10000, 9);
    const auto b = rollout_coin(table1_p1(), 0.6, 10000, 9);
    CHECK(a.cumulative_profit == b.cumulative_profit);
    CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("per-round rewards stay within [-1, 1]") {
    const auto report = rollout_coin(table1_p1(), 0.2, 50000, 3);
    CHECK(report.cumulative_profit >= -50000.0);
    CHECK(report.cumulative_profit <= 50000.0);
    CHECK(report.per_round_mean >= -1.0);
    CHECK(report.per_round_mean <= 1.0);
}

TEST_CASE("exact expected profit oracle") {
    CHECK(expected_profit_coin(never_play(), 0.5) == 0.0);

    // always bet up at p = 0.5: up/down cancel, the tie probability remains
    const auto always_up = PolicyTable::from_bet_values(std::vector<int>(11, 1));
    const double expected = -0.17619705200195312;  // -C(20,10)/4^10
    CHECK(expected_profit_coin(always_up, 0.5) ==
          doctest::Approx(expected).epsilon(1e-14));

    // the published P1 row lands near the paper's Monte-Carlo cell at p = 0.5
    const double p1_at_half = expected_profit_coin(table1_p1(), 0.5);
    CHECK(p1_at_half == doctest::Approx(0.30484).epsilon(0.02));
}

TEST_CASE("rollout agrees with the exact oracle within 5 standard errors") {
    const auto policy = table1_p1();
    for (double p : {0.3, 0.5, 0.7}) {
        const auto report = rollout_coin(policy, p, 100000, 1234);
        const double exact = expected_profit_coin(policy, p);
        CHECK(std::abs(report.per_round_mean - exact) <= 5.0 * report.standard_error);
    }
}

TEST_CASE("backtest identities") {
    ReturnSeries all_up{std::vector<int>(20, 1), "", "fixture"};
    const auto hold = buy_and_hold_policy(32);
    const auto report = backtest(hold, all_up, 5);
    CHECK(report.trades == 15);
    CHECK(report.mean_reward_per_trade == 1.0);
    CHECK(report.period_label == "fixture");

    // buy-and-hold mean equals the average sign of the traded part
    ReturnSeries mixed{{1, 1, -1, 1, -1, -1, 1, 1, 1, -1}, "", ""};
    const std::size_t h = 3;
    const auto mixed_report = backtest(buy_and_hold_policy(8), mixed, h);
    double avg = 0.0;
    for (std::size_t t = h; t < mixed.signs.size(); ++t) avg += mixed.signs[t];
    avg /= static_cast<double>(mixed.signs.size() - h);
    CHECK(mixed_report.mean_reward_per_trade == doctest::Approx(avg).epsilon(1e-15));
    CHECK(mixed_report.trades == mixed.signs.size() - h);

    CHECK_THROWS_AS(backtest(hold, ReturnSeries{{1, 1}, "", ""}, 5),
                    std::invalid_argument);
}

TEST_CASE("trend following is perfect on a constant series") {
    ReturnSeries all_down{std::vector<int>(12, -1), "", ""};
    const auto report = backtest(trend_following_policy(3), all_down, 3);
    CHECK(report.mean_reward_per_trade == 1.0);  // shorting a falling market
}

TEST_CASE("trend following equals acting on the newest sign") {
    ReturnSeries series{{1, -1, -1, 1, 1, 1, -1, 1, -1, -1, 1}, "", ""};
    const std::size_t h = 2;
    const auto report = backtest(trend_following_policy(h), series, h);
    double expected = 0.0;
    for (std::size_t t = h; t < series.signs.size(); ++t)
        expected += series.signs[t - 1] * series.signs[t];
    expected /= static_cast<double>(series.signs.size() - h);
    CHECK(report.mean_reward_per_trade == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("compare_policies marks the best cell per column, ties included") {
    const auto p1 = table1_p1();
    const auto none = never_play();
    std::vector<std::pair<std::string, PolicyTable>> policies = {
        {"p1", p1}, {"none", none}, {"none2", none}};
    std::vector<std::pair<std::string, PolicyEvaluator>> evaluators = {
        {"exact@0.5", [](const PolicyTable& p) { return expected_profit_coin(p, 0.5); }},
        {"exact@0.1", [](const PolicyTable& p) { return expected_profit_coin(p, 0.1); }}};
    const auto table = compare_policies(policies, evaluators);
    REQUIRE(table.values.size() == 3);
    REQUIRE(table.values[0].size() == 2);
    // p1 wins at 0.5; never-play (0.0) beats p1's negative value at 0.1, twice
    CHECK(table.best[0][0]);
    CHECK_FALSE(table.best[1][0]);
    CHECK_FALSE(table.best[0][1]);
    CHECK(table.best[1][1]);
    CHECK(table.best[2][1]);

    const auto solo = compare_policies({{"only", p1}}, evaluators);
    CHECK(solo.best[0][0]);
    CHECK(solo.best[0][1]);
}
