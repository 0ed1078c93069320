#include "vrvi/bellman.hpp"

namespace vrvi {
namespace {

void check_values(const MdpModel& model, std::span<const double> u) {
    if (u.size() != model.num_states()) throw DimensionError("value vector", model.num_states(), u.size());
}

} // namespace

double expected_next(const MdpModel& model, StateIndex i, ActionIndex a, std::span<const double> u) {
    const auto s = model.support(i, a);
    const auto p = model.probs(i, a);
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) acc += p[k] * u[s[k]];
    return acc;
}

Backup greedy_backup(const MdpModel& model, double discount, std::span<const double> u) {
    check_values(model, u);
    Backup out{ValueVector(model.num_states()), Policy(model.num_states())};
    for (StateIndex i = 0; i < model.num_states(); ++i) {
        double best = q_value(model, discount, i, 0, u);
        ActionIndex arg = 0;
        for (ActionIndex a = 1; a < model.num_actions(); ++a) {
            const double q = q_value(model, discount, i, a, u);
            if (q > best) {
                best = q;
                arg = a;
            }
        }
        out.values[i] = best;
        out.policy[i] = arg;
    }
    return out;
}

ValueVector value_operator(const Dmdp& dmdp, std::span<const double> u) {
    return greedy_backup(dmdp, dmdp.discount(), u).values;
}

ValueVector policy_operator(const MdpModel& model, double discount,
                            std::span<const ActionIndex> policy, std::span<const double> u) {
    check_values(model, u);
    check_policy(model, policy);
    ValueVector out(model.num_states());
    for (StateIndex i = 0; i < model.num_states(); ++i)
        out[i] = q_value(model, discount, i, policy[i], u);
    return out;
}

ValueVector policy_operator(const Dmdp& dmdp, std::span<const ActionIndex> policy,
                            std::span<const double> u) {
    return policy_operator(dmdp, dmdp.discount(), policy, u);
}

Policy greedy_policy(const Dmdp& dmdp, std::span<const double> u) {
    return greedy_backup(dmdp, dmdp.discount(), u).policy;
}

} // namespace vrvi
