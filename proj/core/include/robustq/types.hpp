#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustq {

/// State and action labels are small integer vectors; instances index them
/// densely so all tables can stay flat.
using StateLabel = std::vector<int>;
using ActionLabel = std::vector<int>;

namespace detail {
std::string label_to_string(const std::vector<int>& label);
}

class FiniteStateSpace {
public:
    explicit FiniteStateSpace(std::vector<StateLabel> labels);

    std::size_t size() const { return labels_.size(); }
    std::size_t dimension() const { return labels_.empty() ? 0 : labels_.front().size(); }
    const StateLabel& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<StateLabel>& labels() const { return labels_; }
    std::size_t index(const StateLabel& label) const;
    bool contains(const StateLabel& label) const { return index_.count(label) != 0; }

private:
    std::vector<StateLabel> labels_;
    std::map<StateLabel, std::size_t> index_;
};

class FiniteActionSpace {
public:
    explicit FiniteActionSpace(std::vector<ActionLabel> labels);

    std::size_t size() const { return labels_.size(); }
    std::size_t dimension() const { return labels_.front().size(); }
    const ActionLabel& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<ActionLabel>& labels() const { return labels_; }
    std::size_t index(const ActionLabel& label) const;

private:
    std::vector<ActionLabel> labels_;
    std::map<ActionLabel, std::size_t> index_;
};

/// A probability vector over state indices. Construction validates that all
/// entries lie in [0,1] and sum to 1 within 1e-12; out-of-tolerance inputs
/// are rejected rather than renormalized.
class Categorical {
public:
    static constexpr double kSumTolerance = 1e-12;

    explicit Categorical(std::vector<double> probs);

    static Categorical point_mass(std::size_t support, std::size_t at);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    /// Inverse-CDF sample from a uniform draw u in [0,1).
    std::size_t sample(double u) const;

private:
    std::vector<double> probs_;
};

/// The finite ambiguity set: exactly N candidate transition kernels at every
/// (state, action) pair, each a Categorical over the full state space.
class AmbiguitySet {
public:
    AmbiguitySet(std::size_t num_states, std::size_t num_actions,
                 std::vector<Categorical> kernels);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }
    std::size_t num_kernels() const { return num_kernels_; }

    const Categorical& kernel(std::size_t x, std::size_t a, std::size_t k) const {
        return kernels_[(x * num_actions_ + a) * num_kernels_ + k];
    }

private:
    std::size_t num_states_;
    std::size_t num_actions_;
    std::size_t num_kernels_;
    std::vector<Categorical> kernels_;
};

/// Dense r(x, a, x') lookup. All entries must be finite.
class RewardTable {
public:
    RewardTable(std::size_t num_states, std::size_t num_actions,
                std::vector<double> values);
    RewardTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }

    double operator()(std::size_t x, std::size_t a, std::size_t xp) const {
        return values_[(x * num_actions_ + a) * num_states_ + xp];
    }
    double& at(std::size_t x, std::size_t a, std::size_t xp) {
        return values_[(x * num_actions_ + a) * num_states_ + xp];
    }

    double max_abs() const;

private:
    std::size_t num_states_;
    std::size_t num_actions_;
    std::vector<double> values_;
};

/// |X| x |A| table of action values.
class QTable {
public:
    QTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0);
    QTable(std::size_t num_states, std::size_t num_actions, std::vector<double> values);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }

    double operator()(std::size_t x, std::size_t a) const {
        return values_[x * num_actions_ + a];
    }
    double& at(std::size_t x, std::size_t a) { return values_[x * num_actions_ + a]; }

    const std::vector<double>& values() const { return values_; }

    double row_max(std::size_t x) const;
    /// Smallest action index attaining the row maximum.
    std::size_t row_argmax(std::size_t x) const;

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::size_t num_states_;
    std::size_t num_actions_;
    std::vector<double> values_;
};

double sup_distance(const QTable& a, const QTable& b);

/// The full discounted robust problem: spaces, rewards, ambiguity set and
/// discount factor alpha in (0,1).
class DiscountedProblem {
public:
    DiscountedProblem(FiniteStateSpace states, FiniteActionSpace actions,
                      RewardTable rewards, AmbiguitySet ambiguity, double alpha);

    const FiniteStateSpace& states() const { return states_; }
    const FiniteActionSpace& actions() const { return actions_; }
    const RewardTable& rewards() const { return rewards_; }
    const AmbiguitySet& ambiguity() const { return ambiguity_; }
    double alpha() const { return alpha_; }

    std::size_t num_states() const { return states_.size(); }
    std::size_t num_actions() const { return actions_.size(); }
    std::size_t num_kernels() const { return ambiguity_.num_kernels(); }

private:
    FiniteStateSpace states_;
    FiniteActionSpace actions_;
    RewardTable rewards_;
    AmbiguitySet ambiguity_;
    double alpha_;
};

}  // namespace robustq
