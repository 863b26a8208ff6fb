#include "robustq/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robustq {

namespace detail {

std::string label_to_string(const std::vector<int>& label) {
    std::ostringstream out;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (i > 0) out << ';';
        out << label[i];
    }
    return out.str();
}

}  // namespace detail

FiniteStateSpace::FiniteStateSpace(std::vector<StateLabel> labels)
    : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("state space must be nonempty");
    const std::size_t dim = labels_.front().size();
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].size() != dim)
            throw std::invalid_argument("state labels must share one dimension");
        if (!index_.emplace(labels_[i], i).second)
            throw std::invalid_argument("duplicate state label: " +
                                        detail::label_to_string(labels_[i]));
    }
}

std::size_t FiniteStateSpace::index(const StateLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw std::invalid_argument("unknown state label: " + detail::label_to_string(label));
    return it->second;
}

FiniteActionSpace::FiniteActionSpace(std::vector<ActionLabel> labels)
    : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("action space must be nonempty");
    const std::size_t dim = labels_.front().size();
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].size() != dim)
            throw std::invalid_argument("action labels must share one dimension");
        if (!index_.emplace(labels_[i], i).second)
            throw std::invalid_argument("duplicate action label: " +
                                        detail::label_to_string(labels_[i]));
    }
}

std::size_t FiniteActionSpace::index(const ActionLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw std::invalid_argument("unknown action label: " + detail::label_to_string(label));
    return it->second;
}

Categorical::Categorical(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("categorical must be nonempty");
    double sum = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0)
            throw std::invalid_argument("categorical entry outside [0,1]");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw std::invalid_argument("categorical does not sum to 1 within 1e-12 (sum=" +
                                    std::to_string(sum) + ")");
}

Categorical Categorical::point_mass(std::size_t support, std::size_t at) {
    if (at >= support) throw std::invalid_argument("point mass index out of range");
    std::vector<double> p(support, 0.0);
    p[at] = 1.0;
    return Categorical(std::move(p));
}

std::size_t Categorical::sample(double u) const {
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs_.size(); ++i) {
        cum += probs_[i];
        if (u < cum) return i;
    }
    return probs_.size() - 1;
}

AmbiguitySet::AmbiguitySet(std::size_t num_states, std::size_t num_actions,
                           std::vector<Categorical> kernels)
    : num_states_(num_states), num_actions_(num_actions), kernels_(std::move(kernels)) {
    if (num_states_ == 0 || num_actions_ == 0)
        throw std::invalid_argument("ambiguity set needs nonempty spaces");
    const std::size_t pairs = num_states_ * num_actions_;
    if (kernels_.empty() || kernels_.size() % pairs != 0)
        throw std::invalid_argument("ambiguity set must carry the same N >= 1 at every (x,a)");
    num_kernels_ = kernels_.size() / pairs;
    for (const auto& k : kernels_) {
        if (k.size() != num_states_)
            throw std::invalid_argument("kernel dimension mismatch with state space");
    }
}

RewardTable::RewardTable(std::size_t num_states, std::size_t num_actions,
                         std::vector<double> values)
    : num_states_(num_states), num_actions_(num_actions), values_(std::move(values)) {
    if (values_.size() != num_states_ * num_actions_ * num_states_)
        throw std::invalid_argument("reward table size mismatch");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("reward entries must be finite");
    }
}

RewardTable::RewardTable(std::size_t num_states, std::size_t num_actions, double fill)
    : RewardTable(num_states, num_actions,
                  std::vector<double>(num_states * num_actions * num_states, fill)) {}

double RewardTable::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, double fill)
    : num_states_(num_states), num_actions_(num_actions),
      values_(num_states * num_actions, fill) {
    if (num_states_ == 0 || num_actions_ == 0)
        throw std::invalid_argument("Q table needs nonempty spaces");
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, std::vector<double> values)
    : num_states_(num_states), num_actions_(num_actions), values_(std::move(values)) {
    if (values_.size() != num_states_ * num_actions_)
        throw std::invalid_argument("Q table size mismatch");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Q entries must be finite");
    }
}

double QTable::row_max(std::size_t x) const {
    double m = values_[x * num_actions_];
    for (std::size_t a = 1; a < num_actions_; ++a)
        m = std::max(m, values_[x * num_actions_ + a]);
    return m;
}

std::size_t QTable::row_argmax(std::size_t x) const {
    std::size_t best = 0;
    for (std::size_t a = 1; a < num_actions_; ++a) {
        if (values_[x * num_actions_ + a] > values_[x * num_actions_ + best]) best = a;
    }
    return best;
}

double sup_distance(const QTable& a, const QTable& b) {
    if (a.num_states() != b.num_states() || a.num_actions() != b.num_actions())
        throw std::invalid_argument("Q table shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

DiscountedProblem::DiscountedProblem(FiniteStateSpace states, FiniteActionSpace actions,
                                     RewardTable rewards, AmbiguitySet ambiguity,
                                     double alpha)
    : states_(std::move(states)), actions_(std::move(actions)),
      rewards_(std::move(rewards)), ambiguity_(std::move(ambiguity)), alpha_(alpha) {
    if (!(alpha_ > 0.0 && alpha_ < 1.0))
        throw std::invalid_argument("discount factor must satisfy 0 < alpha < 1");
    if (rewards_.num_states() != states_.size() || rewards_.num_actions() != actions_.size())
        throw std::invalid_argument("reward table shape mismatch with spaces");
    if (ambiguity_.num_states() != states_.size() ||
        ambiguity_.num_actions() != actions_.size())
        throw std::invalid_argument("ambiguity set shape mismatch with spaces");
}

}  // namespace robustq
