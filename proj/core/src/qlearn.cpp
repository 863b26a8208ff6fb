#include "robustq/qlearn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robustq {

double LearningRateSchedule::rate(std::uint64_t t, std::uint64_t visits) const {
    double r = 0.0;
    switch (kind) {
        case Kind::GlobalHarmonic:
            r = 1.0 / (offset + static_cast<double>(t));
            break;
        case Kind::VisitHarmonic:
            r = 1.0 / (offset + static_cast<double>(visits));
            break;
        case Kind::CustomSequence: {
            if (sequence.empty())
                throw std::invalid_argument("custom schedule needs a nonempty sequence");
            const std::size_t i =
                std::min<std::size_t>(static_cast<std::size_t>(t), sequence.size() - 1);
            r = sequence[i];
            break;
        }
    }
    if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("learning rate outside [0,1]");
    return r;
}

BehaviorPolicy BehaviorPolicy::epsilon_greedy(double epsilon) {
    BehaviorPolicy p;
    p.kind = Kind::EpsilonGreedy;
    p.epsilon = epsilon;
    return p;
}

BehaviorPolicy BehaviorPolicy::fixed(std::vector<std::size_t> table) {
    BehaviorPolicy p;
    p.kind = Kind::FixedTable;
    p.table = std::move(table);
    return p;
}

BehaviorPolicy BehaviorPolicy::uniform() {
    BehaviorPolicy p;
    p.kind = Kind::UniformRandom;
    return p;
}

void TrainConfig::validate(const DiscountedProblem& problem) const {
    if (!(policy.epsilon >= 0.0 && policy.epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0,1]");
    if (policy.kind == BehaviorPolicy::Kind::FixedTable) {
        if (policy.table.size() != problem.num_states())
            throw std::invalid_argument("fixed policy table must cover every state");
        for (std::size_t a : policy.table) {
            if (a >= problem.num_actions())
                throw std::invalid_argument("fixed policy action index out of range");
        }
    }
    if (initial_state >= problem.num_states())
        throw std::invalid_argument("initial state index out of range");
    if (stability_window < 1)
        throw std::invalid_argument("stability window must be at least 1");
    if (!std::isfinite(q_init)) throw std::invalid_argument("q_init must be finite");
}

TrainState::TrainState(const DiscountedProblem& problem, const TrainConfig& config)
    : q(problem.num_states(), problem.num_actions(), config.q_init),
      visits(problem.num_states() * problem.num_actions(), 0),
      current_state(config.initial_state),
      rng(config.seed),
      stride_(problem.num_actions()) {}

std::uint64_t TrainState::total_visits() const {
    std::uint64_t total = 0;
    for (std::uint64_t v : visits) total += v;
    return total;
}

std::size_t select_action(const BehaviorPolicy& policy, const QTable& q, std::size_t x,
                          std::mt19937_64& rng) {
    if (x >= q.num_states()) throw std::invalid_argument("state index out of range");
    switch (policy.kind) {
        case BehaviorPolicy::Kind::FixedTable:
            return policy.table.at(x);
        case BehaviorPolicy::Kind::UniformRandom:
            return uniform_index(rng, q.num_actions());
        case BehaviorPolicy::Kind::EpsilonGreedy:
            // The explore coin is drawn first, then (only on explore) the
            // action; the uniform draw may return the greedy action too.
            if (uniform01(rng) < policy.epsilon)
                return uniform_index(rng, q.num_actions());
            return q.row_argmax(x);
    }
    throw std::logic_error("unreachable policy kind");
}

StepRecord qlearn_step(TrainState& state, const TrainConfig& config,
                       const DiscountedProblem& problem) {
    const std::size_t x = state.current_state;
    const std::size_t a = select_action(config.policy, state.q, x, state.rng);

    const WorstCase wc = worst_case_index(state.q, x, a, problem);
    const std::size_t xp =
        problem.ambiguity().kernel(x, a, wc.kernel).sample(uniform01(state.rng));

    const double gamma =
        config.schedule.rate(state.t, state.visit_count(x, a));
    const double target =
        problem.rewards()(x, a, xp) + problem.alpha() * state.q.row_max(xp);
    state.q.at(x, a) = (1.0 - gamma) * state.q(x, a) + gamma * target;

    ++state.visits[x * state.stride_ + a];
    ++state.t;
    state.current_state = xp;
    return StepRecord{x, a, wc.kernel, xp, gamma};
}

TrainResult train(const TrainConfig& config, const DiscountedProblem& problem,
                  const QTable* oracle) {
    config.validate(problem);
    const auto start = std::chrono::steady_clock::now();

    TrainState state(problem, config);
    const std::size_t num_actions = problem.num_actions();
    const std::size_t num_kernels = problem.num_kernels();

    TrainResult result{state.q};
    result.worst_case_histogram.assign(
        problem.num_states() * num_actions * num_kernels, 0);
    result.visit_trace.reserve(static_cast<std::size_t>(config.iterations));

    const std::uint64_t cadence = config.checkpoint_every > 0
                                      ? config.checkpoint_every
                                      : std::max<std::uint64_t>(1, config.iterations / 100);

    for (std::uint64_t i = 0; i < config.iterations; ++i) {
        const StepRecord rec = qlearn_step(state, config, problem);
        result.visit_trace.push_back(
            static_cast<std::uint32_t>(rec.state * num_actions + rec.action));
        ++result.worst_case_histogram[(rec.state * num_actions + rec.action) * num_kernels +
                                      rec.worst_kernel];
        if (state.t % cadence == 0 || state.t == config.iterations) {
            const double gap =
                oracle ? sup_distance(state.q, *oracle)
                       : std::numeric_limits<double>::quiet_NaN();
            result.checkpoints.push_back(Checkpoint{state.t, greedy_policy(state.q), gap});
        }
    }

    result.final_q = state.q;
    result.final_visits = state.visits;
    result.policy_stable = greedy_policy_stable(result.checkpoints, config.stability_window);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

bool greedy_policy_stable(const std::vector<Checkpoint>& checkpoints, std::size_t window) {
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    if (checkpoints.size() < window) return false;
    const auto& last = checkpoints.back().greedy;
    for (std::size_t i = checkpoints.size() - window; i < checkpoints.size(); ++i) {
        if (checkpoints[i].greedy != last) return false;
    }
    return true;
}

DiagnosticsReport robbins_monro_diagnostics(const LearningRateSchedule& schedule,
                                            const std::vector<std::uint32_t>& visit_trace,
                                            std::size_t num_states, std::size_t num_actions,
                                            std::uint64_t visit_floor) {
    DiagnosticsReport report;
    report.pairs.assign(num_states * num_actions, PairDiagnostics{});
    std::vector<std::uint64_t> visits(num_states * num_actions, 0);
    for (std::size_t t = 0; t < visit_trace.size(); ++t) {
        const std::uint32_t pair = visit_trace[t];
        if (pair >= report.pairs.size())
            throw std::invalid_argument("visit trace entry out of range");
        const double gamma = schedule.rate(t, visits[pair]);
        report.pairs[pair].sum_rates += gamma;
        report.pairs[pair].sum_squared_rates += gamma * gamma;
        ++visits[pair];
        ++report.pairs[pair].visits;
    }
    for (auto& p : report.pairs) {
        p.flagged = p.visits < visit_floor;
        if (p.flagged) ++report.flagged_count;
    }
    return report;
}

}  // namespace robustq
