#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "robustq/operators.hpp"
#include "robustq/types.hpp"

namespace robustq {

/// Deterministic uniform double in [0,1) from the run's generator. All
/// randomness in a training run flows through this one mapping.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in {0, ..., n-1}.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

struct LearningRateSchedule {
    enum class Kind { GlobalHarmonic, VisitHarmonic, CustomSequence };

    Kind kind = Kind::GlobalHarmonic;
    /// Offset c in 1/(c + t) or 1/(c + visits); the default c = 1 gives the
    /// harmonic sequence starting at 1.
    double offset = 1.0;
    /// For CustomSequence: rate at step t, clamped to the last entry past the end.
    std::vector<double> sequence;

    double rate(std::uint64_t t, std::uint64_t visits) const;
};

struct BehaviorPolicy {
    enum class Kind { EpsilonGreedy, FixedTable, UniformRandom };

    Kind kind = Kind::EpsilonGreedy;
    double epsilon = 0.1;
    /// For FixedTable: per-state action index.
    std::vector<std::size_t> table;

    static BehaviorPolicy epsilon_greedy(double epsilon);
    static BehaviorPolicy fixed(std::vector<std::size_t> table);
    static BehaviorPolicy uniform();
};

struct TrainConfig {
    LearningRateSchedule schedule;
    BehaviorPolicy policy;
    std::uint64_t iterations = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t initial_state = 0;
    double q_init = 0.0;
    std::size_t stability_window = 10;
    /// 0 means the default cadence max(1, iterations / 100).
    std::uint64_t checkpoint_every = 0;

    void validate(const DiscountedProblem& problem) const;
};

struct TrainState {
    QTable q;
    std::vector<std::uint64_t> visits;  // flat |X| x |A|
    std::uint64_t t = 0;
    std::size_t current_state = 0;
    std::mt19937_64 rng;

    TrainState(const DiscountedProblem& problem, const TrainConfig& config);

    std::uint64_t visit_count(std::size_t x, std::size_t a) const {
        return visits[x * stride_ + a];
    }
    std::uint64_t total_visits() const;

    std::size_t stride_ = 0;
};

/// What one loop iteration actually did; used by tests and diagnostics.
struct StepRecord {
    std::size_t state;
    std::size_t action;
    std::size_t worst_kernel;
    std::size_t next_state;
    double rate;
};

struct Checkpoint {
    std::uint64_t t;
    std::vector<std::size_t> greedy;
    double oracle_gap;  // sup |Q_t - Q*| when an oracle was supplied, else NaN
};

struct TrainResult {
    QTable final_q;
    std::vector<std::uint64_t> final_visits;
    std::vector<Checkpoint> checkpoints;
    /// Flat (x, a, k) counts of how often each kernel was selected as worst case.
    std::vector<std::uint64_t> worst_case_histogram;
    /// Flattened (x * |A| + a) pair visited at each step, in order.
    std::vector<std::uint32_t> visit_trace;
    double wall_seconds = 0.0;
    bool policy_stable = false;
};

std::size_t select_action(const BehaviorPolicy& policy, const QTable& q, std::size_t x,
                          std::mt19937_64& rng);

/// One loop body: pick a_t, find the worst-case kernel at (X_t, a_t), sample
/// X_{t+1} from it, update Q at (X_t, a_t) only, advance state and counters.
StepRecord qlearn_step(TrainState& state, const TrainConfig& config,
                       const DiscountedProblem& problem);

TrainResult train(const TrainConfig& config, const DiscountedProblem& problem,
                  const QTable* oracle = nullptr);

/// True iff the greedy policy is identical across the last `window` checkpoints.
bool greedy_policy_stable(const std::vector<Checkpoint>& checkpoints, std::size_t window);

struct PairDiagnostics {
    std::uint64_t visits = 0;
    double sum_rates = 0.0;
    double sum_squared_rates = 0.0;
    bool flagged = false;
};

struct DiagnosticsReport {
    std::vector<PairDiagnostics> pairs;  // flat |X| x |A|
    std::size_t flagged_count = 0;
};

/// Partial Robbins-Monro sums of the realized step sizes per (x,a), built from
/// the visit trace of a finished run. Pairs under `visit_floor` are flagged;
/// this is a heuristic report, not a convergence certificate.
DiagnosticsReport robbins_monro_diagnostics(const LearningRateSchedule& schedule,
                                            const std::vector<std::uint32_t>& visit_trace,
                                            std::size_t num_states, std::size_t num_actions,
                                            std::uint64_t visit_floor = 100);

}  // namespace robustq
