#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "robustq/types.hpp"

namespace robustq {

struct BinomialSpec {
    int trials = 10;
    double p = 0.5;
};

/// Exact Bin(n, p) pmf over {0, ..., n}.
Categorical binomial_pmf(const BinomialSpec& spec);

/// Coin-toss reward: a if x < x', -a if x > x', -|a| on a tie.
int coin_reward(int x, int a, int xp);

/// The 11-state coin-toss game with actions {-1, 0, +1} and one binomial
/// kernel per entry of `params`, identical at every (x, a).
DiscountedProblem build_coin_problem(const std::vector<double>& params, double alpha);

/// Exact W1 between Bin(n,p) and Bin(n,q) on the integer line, as the sum of
/// absolute CDF differences.
double wasserstein1_binomial(double p, double q, int n);

/// Finite proxy for a Wasserstein ball around Bin(10, center): every Bin(10, p')
/// with p' on the grid center +/- k*step whose W1 distance to the center is
/// within radius.
DiscountedProblem build_wasserstein_proxy(double center_p, double radius,
                                          double grid_step, double alpha);

/// The grid of binomial parameters the proxy uses, ascending.
std::vector<double> wasserstein_proxy_grid(double center_p, double radius,
                                           double grid_step);

/// Sign series over {-1, +1} with provenance metadata.
struct ReturnSeries {
    std::vector<int> signs;
    std::string instrument;
    std::string date_range;
};

struct MarketModelSpec {
    std::size_t h = 5;
    double gamma_smooth = 1e-6;
};

/// States {-1,+1}^h in lexicographic order with -1 < +1; component 1 is the
/// oldest return, component h the newest.
FiniteStateSpace encode_market_states(std::size_t h);

/// Raw window counts: counts[x][i] = number of length-h windows in the series
/// equal to (pi(x), i), with i indexed 0 -> -1, 1 -> +1. Depends on x only
/// through its last h-1 components.
std::vector<std::array<std::uint64_t, 2>> empirical_frequencies(const ReturnSeries& series,
                                                                std::size_t h);

/// Smoothed transition probabilities p_i(x) = (counts + gamma/2) / (gamma + total),
/// exactly normalized per state.
std::vector<std::array<double, 2>> smooth_probabilities(
    const std::vector<std::array<std::uint64_t, 2>>& counts, double gamma_smooth);

/// Partially deterministic market problem: from x the chain can only move to
/// (pi(x), i) for i in {-1,+1}, with probability p_i(x) taken from the
/// corresponding table. One ambiguity-set member per table. Reward is
/// a * (newest component of x').
DiscountedProblem build_market_problem(
    const std::vector<std::vector<std::array<double, 2>>>& tables, std::size_t h,
    double alpha);

/// Signs of consecutive returns; a zero return maps to +1.
ReturnSeries signs_from_prices(const std::vector<double>& prices);

}  // namespace robustq
