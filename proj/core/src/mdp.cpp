#include "vrvi/mdp.hpp"

#include <algorithm>
#include <cmath>

namespace vrvi {

MdpModel::MdpModel(std::size_t num_states, std::size_t num_actions,
                   const std::vector<std::vector<Transition>>& rows, std::vector<double> rewards,
                   double reward_bound)
    : num_states_(num_states), num_actions_(num_actions), rewards_(std::move(rewards)),
      reward_bound_(reward_bound) {
    if (num_states_ == 0 || num_actions_ == 0)
        throw DimensionError("state and action counts must be positive", 1, 0);
    if (rows.size() != num_pairs())
        throw DimensionError("transition rows", num_pairs(), rows.size());
    if (rewards_.size() != num_pairs())
        throw DimensionError("reward table", num_pairs(), rewards_.size());

    offsets_.reserve(rows.size() + 1);
    offsets_.push_back(0);
    for (const auto& row : rows) {
        for (const auto& t : row) {
            next_.push_back(t.next);
            prob_.push_back(t.prob);
        }
        offsets_.push_back(next_.size());
    }
}

std::vector<Transition> MdpModel::row(StateIndex i, ActionIndex a) const {
    const auto s = support(i, a);
    const auto p = probs(i, a);
    std::vector<Transition> out(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) out[k] = {s[k], p[k]};
    return out;
}

void validate(const MdpModel& model) {
    const double m = model.reward_bound();
    if (!(m > 0.0) || !std::isfinite(m)) throw RewardBoundError(m);

    for (StateIndex i = 0; i < model.num_states(); ++i) {
        for (ActionIndex a = 0; a < model.num_actions(); ++a) {
            const auto s = model.support(i, a);
            const auto p = model.probs(i, a);
            double sum = 0.0;
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (s[k] >= model.num_states())
                    throw StateIndexError(i, a, s[k], model.num_states());
                if (!(p[k] >= 0.0)) throw NegativeProbabilityError(i, a, s[k], p[k]);
                sum += p[k];
            }
            if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) throw RowSumError(i, a, sum);

            const double r = model.reward(i, a);
            if (!(std::abs(r) <= m)) throw RewardBoundError(i, a, r, m);
        }
    }
}

void validate(const Dmdp& dmdp) {
    const double g = dmdp.discount();
    if (!(g > 0.0 && g < 1.0)) throw DiscountRangeError(g);
    validate(static_cast<const MdpModel&>(dmdp));
}

void validate(const FiniteHorizonMdp& fh) {
    if (fh.horizon() < 1) throw HorizonError(fh.horizon());
    validate(static_cast<const MdpModel&>(fh));
}

void check_policy(const MdpModel& model, std::span<const ActionIndex> policy) {
    if (policy.size() != model.num_states())
        throw DimensionError("policy", model.num_states(), policy.size());
    for (auto a : policy)
        if (a >= model.num_actions()) throw PreconditionError("policy action index out of range");
}

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("sup_distance", a.size(), b.size());
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace vrvi
