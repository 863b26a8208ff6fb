#include "support/test_helpers.hpp"

#include <cmath>

namespace robustq::testing {

ClassicalResult classical_value_iteration(const DiscountedProblem& problem, double tol,
                                          std::size_t max_iter) {
    const std::size_t nx = problem.num_states();
    const std::size_t na = problem.num_actions();
    const RewardTable& r = problem.rewards();
    const double alpha = problem.alpha();

    std::vector<double> v(nx, 0.0);
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<double> next(nx);
        for (std::size_t x = 0; x < nx; ++x) {
            double best = -1e300;
            for (std::size_t a = 0; a < na; ++a) {
                const Categorical& p = problem.ambiguity().kernel(x, a, 0);
                double val = 0.0;
                for (std::size_t xp = 0; xp < nx; ++xp)
                    val += p[xp] * (r(x, a, xp) + alpha * v[xp]);
                best = std::max(best, val);
            }
            next[x] = best;
        }
        double res = 0.0;
        for (std::size_t x = 0; x < nx; ++x) res = std::max(res, std::abs(next[x] - v[x]));
        v = std::move(next);
        if (res <= tol) break;
    }

    QTable q(nx, na);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t a = 0; a < na; ++a) {
            const Categorical& p = problem.ambiguity().kernel(x, a, 0);
            double val = 0.0;
            for (std::size_t xp = 0; xp < nx; ++xp)
                val += p[xp] * (r(x, a, xp) + alpha * v[xp]);
            q.at(x, a) = val;
        }
    }
    return ClassicalResult{std::move(v), std::move(q)};
}

DiscountedProblem random_classical_problem(std::mt19937_64& rng, std::size_t nx,
                                           std::size_t na, double alpha) {
    std::vector<StateLabel> states;
    for (std::size_t i = 0; i < nx; ++i) states.push_back({static_cast<int>(i)});
    std::vector<ActionLabel> actions;
    for (std::size_t i = 0; i < na; ++i) actions.push_back({static_cast<int>(i)});

    std::uniform_real_distribution<double> reward_dist(-1.0, 1.0);
    RewardTable rewards(nx, na);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t xp = 0; xp < nx; ++xp)
                rewards.at(x, a, xp) = reward_dist(rng);

    std::vector<Categorical> kernels;
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t a = 0; a < na; ++a)
            kernels.push_back(random_categorical(rng, nx));

    return DiscountedProblem(FiniteStateSpace(std::move(states)),
                             FiniteActionSpace(std::move(actions)), std::move(rewards),
                             AmbiguitySet(nx, na, std::move(kernels)), alpha);
}

}  // namespace robustq::testing
