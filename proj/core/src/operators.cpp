#include "robustq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robustq {

namespace {

double expect_target_with_values(const Categorical& dist, const std::vector<double>& v,
                                 std::size_t x, std::size_t a,
                                 const DiscountedProblem& problem) {
    const RewardTable& r = problem.rewards();
    const double alpha = problem.alpha();
    double acc = 0.0;
    for (std::size_t xp = 0; xp < dist.size(); ++xp) {
        const double p = dist[xp];
        if (p == 0.0) continue;
        acc += p * (r(x, a, xp) + alpha * v[xp]);
    }
    return acc;
}

WorstCase worst_case_with_values(const std::vector<double>& v, std::size_t x,
                                 std::size_t a, const DiscountedProblem& problem) {
    const AmbiguitySet& amb = problem.ambiguity();
    WorstCase best{0, expect_target_with_values(amb.kernel(x, a, 0), v, x, a, problem)};
    for (std::size_t k = 1; k < amb.num_kernels(); ++k) {
        const double val =
            expect_target_with_values(amb.kernel(x, a, k), v, x, a, problem);
        if (val < best.value) best = WorstCase{k, val};
    }
    return best;
}

}  // namespace

double expect_target(const Categorical& dist, const QTable& q, std::size_t x,
                     std::size_t a, const DiscountedProblem& problem) {
    if (dist.size() != problem.num_states())
        throw std::invalid_argument("distribution dimension mismatch with state space");
    if (x >= problem.num_states() || a >= problem.num_actions())
        throw std::invalid_argument("state or action index out of range");
    return expect_target_with_values(dist, value_from_Q(q), x, a, problem);
}

WorstCase worst_case_index(const QTable& q, std::size_t x, std::size_t a,
                           const DiscountedProblem& problem) {
    if (x >= problem.num_states() || a >= problem.num_actions())
        throw std::invalid_argument("state or action index out of range");
    return worst_case_with_values(value_from_Q(q), x, a, problem);
}

QTable apply_H(const QTable& q, const DiscountedProblem& problem) {
    const std::vector<double> v = value_from_Q(q);
    QTable out(problem.num_states(), problem.num_actions());
    for (std::size_t x = 0; x < problem.num_states(); ++x) {
        for (std::size_t a = 0; a < problem.num_actions(); ++a) {
            out.at(x, a) = worst_case_with_values(v, x, a, problem).value;
        }
    }
    return out;
}

ValueIterationResult robust_value_iteration(const DiscountedProblem& problem, double tol,
                                            std::size_t max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

    ValueIterationResult result{QTable(problem.num_states(), problem.num_actions())};
    result.residual_history.reserve(64);
    for (std::size_t it = 0; it < max_iter; ++it) {
        QTable next = apply_H(result.q, problem);
        result.residual = sup_distance(next, result.q);
        result.residual_history.push_back(result.residual);
        result.q = std::move(next);
        result.iterations = it + 1;
        if (result.residual <= tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::vector<std::size_t> greedy_policy(const QTable& q) {
    std::vector<std::size_t> policy(q.num_states());
    for (std::size_t x = 0; x < q.num_states(); ++x) policy[x] = q.row_argmax(x);
    return policy;
}

std::vector<double> value_from_Q(const QTable& q) {
    std::vector<double> v(q.num_states());
    for (std::size_t x = 0; x < q.num_states(); ++x) v[x] = q.row_max(x);
    return v;
}

std::vector<double> apply_T(const std::vector<double>& v, const DiscountedProblem& problem) {
    if (v.size() != problem.num_states())
        throw std::invalid_argument("value vector dimension mismatch");
    std::vector<double> out(v.size());
    for (std::size_t x = 0; x < v.size(); ++x) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < problem.num_actions(); ++a) {
            best = std::max(best, worst_case_with_values(v, x, a, problem).value);
        }
        out[x] = best;
    }
    return out;
}

}  // namespace robustq
