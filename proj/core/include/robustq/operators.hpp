#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "robustq/types.hpp"

namespace robustq {

/// E_P[r(x,a,X') + alpha * max_b Q(X',b)] under one candidate kernel.
double expect_target(const Categorical& dist, const QTable& q, std::size_t x,
                     std::size_t a, const DiscountedProblem& problem);

struct WorstCase {
    std::size_t kernel;  // smallest minimizing index
    double value;
};

/// Minimizes the expected bootstrap target over the N candidate kernels at
/// (x, a). Ties break to the smallest kernel index.
WorstCase worst_case_index(const QTable& q, std::size_t x, std::size_t a,
                           const DiscountedProblem& problem);

/// One full worst-case Bellman backup: out(x,a) = min_k E_k[r + alpha max_b Q].
QTable apply_H(const QTable& q, const DiscountedProblem& problem);

struct ValueIterationResult {
    QTable q;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> residual_history;
};

/// Iterates apply_H from Q = 0 until the sup-norm residual drops below tol or
/// max_iter is reached; the alpha-contraction of the backup guarantees the
/// limit is the unique fixed point.
ValueIterationResult robust_value_iteration(const DiscountedProblem& problem,
                                            double tol = 1e-10,
                                            std::size_t max_iter = 100000);

/// Per-state smallest argmax action index.
std::vector<std::size_t> greedy_policy(const QTable& q);

/// V(x) = max_a Q(x,a).
std::vector<double> value_from_Q(const QTable& q);

/// Direct one-step evaluation max_a min_P E_P[r + alpha V] from a state-value
/// vector, without going through a Q table.
std::vector<double> apply_T(const std::vector<double>& v, const DiscountedProblem& problem);

}  // namespace robustq
