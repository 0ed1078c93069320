#pragma once

#include <span>

#include "vrvi/mdp.hpp"

namespace vrvi {

/// p_a(i)^T u over the sparse support of row (i, a).
double expected_next(const MdpModel& model, StateIndex i, ActionIndex a, std::span<const double> u);

/// r_a(i) + discount * p_a(i)^T u. Finite-horizon backups pass discount = 1.
inline double q_value(const MdpModel& model, double discount, StateIndex i, ActionIndex a,
                      std::span<const double> u) {
    return model.reward(i, a) + discount * expected_next(model, i, a, u);
}

/// Result of a max-backup: the backed-up values and the maximizing actions.
struct Backup {
    ValueVector values;
    Policy policy;
};

/// Exact max-backup T(u) together with its argmax (lowest action index on ties).
Backup greedy_backup(const MdpModel& model, double discount, std::span<const double> u);

/// T(u)_i = max_a [r_a(i) + gamma p_a(i)^T u].
ValueVector value_operator(const Dmdp& dmdp, std::span<const double> u);

/// T_pi(u)_i = r_{pi_i}(i) + gamma p_{pi_i}(i)^T u.
ValueVector policy_operator(const Dmdp& dmdp, std::span<const ActionIndex> policy,
                            std::span<const double> u);
ValueVector policy_operator(const MdpModel& model, double discount,
                            std::span<const ActionIndex> policy, std::span<const double> u);

/// Per state, an action attaining the max in T(u); ties go to the lowest index.
Policy greedy_policy(const Dmdp& dmdp, std::span<const double> u);

} // namespace vrvi
