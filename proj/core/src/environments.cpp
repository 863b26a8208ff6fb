#include "robustq/environments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace robustq {

namespace {

std::vector<StateLabel> integer_states(int count) {
    std::vector<StateLabel> labels;
    labels.reserve(count);
    for (int i = 0; i < count; ++i) labels.push_back({i});
    return labels;
}

FiniteActionSpace bet_actions() {
    return FiniteActionSpace({{-1}, {0}, {1}});
}

DiscountedProblem coin_problem_from_pmfs(const std::vector<Categorical>& pmfs,
                                         double alpha) {
    const std::size_t nx = 11;
    FiniteStateSpace states(integer_states(static_cast<int>(nx)));
    FiniteActionSpace actions = bet_actions();

    RewardTable rewards(nx, actions.size());
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t a = 0; a < actions.size(); ++a) {
            const int aval = actions.label(a)[0];
            for (std::size_t xp = 0; xp < nx; ++xp) {
                rewards.at(x, a, xp) = coin_reward(static_cast<int>(x), aval,
                                                   static_cast<int>(xp));
            }
        }
    }

    // The ambiguity set does not depend on (x, a); replicate the pmfs.
    std::vector<Categorical> kernels;
    kernels.reserve(nx * actions.size() * pmfs.size());
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t a = 0; a < actions.size(); ++a) {
            for (const auto& pmf : pmfs) kernels.push_back(pmf);
        }
    }
    return DiscountedProblem(std::move(states), std::move(actions), std::move(rewards),
                             AmbiguitySet(nx, 3, std::move(kernels)), alpha);
}

std::size_t market_mask(std::size_t h) { return (std::size_t{1} << (h - 1)) - 1; }

}  // namespace

Categorical binomial_pmf(const BinomialSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("binomial needs at least one trial");
    if (!(spec.p >= 0.0 && spec.p <= 1.0))
        throw std::invalid_argument("binomial p must lie in [0,1]");
    const int n = spec.trials;
    std::vector<double> probs(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        double c = 1.0;
        for (int j = 0; j < k; ++j) c = c * static_cast<double>(n - j) / (j + 1);
        probs[k] = c * std::pow(spec.p, k) * std::pow(1.0 - spec.p, n - k);
    }
    return Categorical(std::move(probs));
}

int coin_reward(int x, int a, int xp) {
    return a * (x < xp) - a * (x > xp) - std::abs(a) * (x == xp);
}

DiscountedProblem build_coin_problem(const std::vector<double>& params, double alpha) {
    if (params.empty()) throw std::invalid_argument("coin problem needs at least one kernel");
    std::vector<Categorical> pmfs;
    pmfs.reserve(params.size());
    for (double p : params) pmfs.push_back(binomial_pmf({10, p}));
    return coin_problem_from_pmfs(pmfs, alpha);
}

double wasserstein1_binomial(double p, double q, int n) {
    const Categorical a = binomial_pmf({n, p});
    const Categorical b = binomial_pmf({n, q});
    double dist = 0.0, ca = 0.0, cb = 0.0;
    for (int k = 0; k < n; ++k) {
        ca += a[k];
        cb += b[k];
        dist += std::abs(ca - cb);
    }
    return dist;
}

std::vector<double> wasserstein_proxy_grid(double center_p, double radius,
                                           double grid_step) {
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (radius < 0.0) throw std::invalid_argument("radius must be nonnegative");
    if (!(center_p >= 0.0 && center_p <= 1.0))
        throw std::invalid_argument("center p must lie in [0,1]");
    std::set<double> grid;
    const long max_k = static_cast<long>(std::ceil(1.0 / grid_step)) + 1;
    for (long k = -max_k; k <= max_k; ++k) {
        const double pp = center_p + static_cast<double>(k) * grid_step;
        if (pp < -1e-12 || pp > 1.0 + 1e-12) continue;
        const double clamped = std::min(1.0, std::max(0.0, pp));
        if (wasserstein1_binomial(center_p, clamped, 10) <= radius + 1e-12)
            grid.insert(clamped);
    }
    return {grid.begin(), grid.end()};
}

DiscountedProblem build_wasserstein_proxy(double center_p, double radius,
                                          double grid_step, double alpha) {
    return build_coin_problem(wasserstein_proxy_grid(center_p, radius, grid_step), alpha);
}

FiniteStateSpace encode_market_states(std::size_t h) {
    if (h < 1) throw std::invalid_argument("window length must be at least 1");
    if (h > 20) throw std::invalid_argument("window length too large for a dense table");
    const std::size_t count = std::size_t{1} << h;
    std::vector<StateLabel> labels;
    labels.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        StateLabel label(h);
        for (std::size_t j = 0; j < h; ++j) {
            const bool up = (s >> (h - 1 - j)) & 1u;
            label[j] = up ? 1 : -1;
        }
        labels.push_back(std::move(label));
    }
    return FiniteStateSpace(std::move(labels));
}

std::vector<std::array<std::uint64_t, 2>> empirical_frequencies(const ReturnSeries& series,
                                                                std::size_t h) {
    if (h < 1) throw std::invalid_argument("window length must be at least 1");
    if (series.signs.size() < h)
        throw std::invalid_argument("series shorter than the window length");
    for (int s : series.signs) {
        if (s != -1 && s != 1) throw std::invalid_argument("series entries must be -1 or +1");
    }
    const std::size_t num_states = std::size_t{1} << h;
    // Windows are counted once per suffix class pi(x); rows for the two states
    // sharing a suffix are identical.
    std::vector<std::array<std::uint64_t, 2>> by_suffix(
        std::max<std::size_t>(1, num_states >> 1), {std::uint64_t{0}, 0});

    for (std::size_t j = 0; j + h <= series.signs.size(); ++j) {
        std::size_t w = 0;
        for (std::size_t m = 0; m < h; ++m)
            w = (w << 1) | (series.signs[j + m] > 0 ? 1u : 0u);
        const std::size_t suffix = w >> 1;
        const std::size_t i_bit = w & 1u;
        ++by_suffix[suffix][i_bit];
    }

    std::vector<std::array<std::uint64_t, 2>> counts(num_states);
    const std::size_t mask = market_mask(h);
    for (std::size_t x = 0; x < num_states; ++x) counts[x] = by_suffix[x & mask];
    return counts;
}

std::vector<std::array<double, 2>> smooth_probabilities(
    const std::vector<std::array<std::uint64_t, 2>>& counts, double gamma_smooth) {
    if (!(gamma_smooth > 0.0))
        throw std::invalid_argument("smoothing constant must be positive");
    std::vector<std::array<double, 2>> probs(counts.size());
    for (std::size_t x = 0; x < counts.size(); ++x) {
        const double total = static_cast<double>(counts[x][0] + counts[x][1]);
        const double denom = gamma_smooth + total;
        probs[x] = {(static_cast<double>(counts[x][0]) + gamma_smooth / 2.0) / denom,
                    (static_cast<double>(counts[x][1]) + gamma_smooth / 2.0) / denom};
    }
    return probs;
}

DiscountedProblem build_market_problem(
    const std::vector<std::vector<std::array<double, 2>>>& tables, std::size_t h,
    double alpha) {
    if (tables.empty()) throw std::invalid_argument("market problem needs at least one table");
    FiniteStateSpace states = encode_market_states(h);
    FiniteActionSpace actions = bet_actions();
    const std::size_t nx = states.size();
    for (const auto& table : tables) {
        if (table.size() != nx)
            throw std::invalid_argument("probability table must cover all 2^h states");
    }

    RewardTable rewards(nx, actions.size());
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t a = 0; a < actions.size(); ++a) {
            const int aval = actions.label(a)[0];
            for (std::size_t xp = 0; xp < nx; ++xp) {
                const int newest = (xp & 1u) ? 1 : -1;
                rewards.at(x, a, xp) = static_cast<double>(aval * newest);
            }
        }
    }

    const std::size_t mask = market_mask(h);
    const std::size_t full_mask = nx - 1;
    std::vector<Categorical> kernels;
    kernels.reserve(nx * actions.size() * tables.size());
    for (std::size_t x = 0; x < nx; ++x) {
        std::vector<Categorical> per_state;
        per_state.reserve(tables.size());
        for (const auto& table : tables) {
            std::vector<double> probs(nx, 0.0);
            const std::size_t down = ((x & mask) << 1) & full_mask;  // (pi(x), -1)
            const std::size_t up = down | 1u;                        // (pi(x), +1)
            probs[down] += table[x][0];
            probs[up] += table[x][1];
            per_state.push_back(Categorical(std::move(probs)));
        }
        for (std::size_t a = 0; a < actions.size(); ++a) {
            for (const auto& k : per_state) kernels.push_back(k);
        }
    }
    return DiscountedProblem(std::move(states), std::move(actions), std::move(rewards),
                             AmbiguitySet(nx, 3, std::move(kernels)), alpha);
}

ReturnSeries signs_from_prices(const std::vector<double>& prices) {
    if (prices.size() < 2) throw std::invalid_argument("need at least two prices");
    ReturnSeries series;
    series.signs.reserve(prices.size() - 1);
    for (double p : prices) {
        if (!(p > 0.0)) throw std::invalid_argument("prices must be positive");
    }
    for (std::size_t i = 1; i < prices.size(); ++i) {
        // zero return maps to +1 by convention
        series.signs.push_back(prices[i] >= prices[i - 1] ? 1 : -1);
    }
    return series;
}

}  // namespace robustq
