#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "robustq/types.hpp"

namespace robustq::testing {

inline std::filesystem::path test_data_dir() {
    const char* env = std::getenv("ROBUSTQ_TEST_DATA");
    return env ? std::filesystem::path(env) : std::filesystem::path("tests/data");
}

inline QTable random_qtable(std::mt19937_64& rng, std::size_t nx, std::size_t na,
                            double lo = -10.0, double hi = 10.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> values(nx * na);
    for (double& v : values) v = dist(rng);
    return QTable(nx, na, std::move(values));
}

inline Categorical random_categorical(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(0.01, 1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& v : w) {
        v = dist(rng);
        sum += v;
    }
    for (double& v : w) v /= sum;
    // nudge the last entry so the sum is exact
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) acc += w[i];
    w[n - 1] = 1.0 - acc;
    return Categorical(std::move(w));
}

/// Classical (non-robust) value iteration on V, kept independent of the
/// robust operator path it is used to check. Expects N = 1 problems.
struct ClassicalResult {
    std::vector<double> v;
    QTable q;
};

ClassicalResult classical_value_iteration(const DiscountedProblem& problem, double tol,
                                          std::size_t max_iter);

/// Random N = 1 problem with dense random kernels and rewards in [-1, 1].
DiscountedProblem random_classical_problem(std::mt19937_64& rng, std::size_t nx,
                                           std::size_t na, double alpha);

}  // namespace robustq::testing
