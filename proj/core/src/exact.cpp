#include "vrvi/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "vrvi/bellman.hpp"

namespace vrvi {
namespace {

void check_target(double target) {
    if (!(target > 0.0)) throw PreconditionError("target tolerance must be positive");
}

double residual_threshold(double target, double discount) {
    return target * (1.0 - discount) / discount;
}

ValueVector solve_policy_direct(const Dmdp& dmdp, std::span<const ActionIndex> policy) {
    const auto n = static_cast<Eigen::Index>(dmdp.num_states());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs(n);
    for (StateIndex i = 0; i < dmdp.num_states(); ++i) {
        const auto s = dmdp.support(i, policy[i]);
        const auto p = dmdp.probs(i, policy[i]);
        for (std::size_t k = 0; k < s.size(); ++k) system(i, s[k]) -= dmdp.discount() * p[k];
        rhs(i) = dmdp.reward(i, policy[i]);
    }
    const Eigen::VectorXd v = system.partialPivLu().solve(rhs);
    return ValueVector(v.data(), v.data() + n);
}

} // namespace

ExactViResult exact_value_iteration(const Dmdp& dmdp, std::span<const double> v0, double target,
                                    std::uint64_t max_iterations) {
    check_target(target);
    if (v0.size() != dmdp.num_states()) throw DimensionError("v0", dmdp.num_states(), v0.size());

    const double threshold = residual_threshold(target, dmdp.discount());
    ValueVector v(v0.begin(), v0.end());
    for (std::uint64_t it = 1; it <= max_iterations; ++it) {
        ValueVector next = value_operator(dmdp, v);
        const double residual = sup_distance(next, v);
        v = std::move(next);
        if (residual <= threshold) return {std::move(v), it};
    }
    throw IterationLimitError(max_iterations);
}

ValueVector policy_values(const Dmdp& dmdp, std::span<const ActionIndex> policy, double target,
                          std::uint64_t max_iterations) {
    check_target(target);
    check_policy(dmdp, policy);
    if (dmdp.num_states() <= kDirectSolveMaxStates) return solve_policy_direct(dmdp, policy);

    const double threshold = residual_threshold(target, dmdp.discount());
    ValueVector v(dmdp.num_states(), 0.0);
    for (std::uint64_t it = 0; it < max_iterations; ++it) {
        ValueVector next = policy_operator(dmdp, policy, v);
        const double residual = sup_distance(next, v);
        v = std::move(next);
        if (residual <= threshold) return v;
    }
    throw IterationLimitError(max_iterations);
}

OptimalSolution optimal_oracle(const Dmdp& dmdp, double target, OracleMode mode) {
    check_target(target);
    if (mode == OracleMode::value_iteration) {
        auto vi = exact_value_iteration(dmdp, ValueVector(dmdp.num_states(), 0.0), target);
        Policy pi = greedy_policy(dmdp, vi.values);
        return {std::move(vi.values), std::move(pi)};
    }

    if (dmdp.num_states() > kBruteForceMaxStates || dmdp.num_actions() > kBruteForceMaxActions)
        throw PreconditionError("brute-force oracle is limited to 6 states and 3 actions");

    const std::size_t n = dmdp.num_states();
    const ActionIndex num_actions = static_cast<ActionIndex>(dmdp.num_actions());
    ValueVector best(n, -std::numeric_limits<double>::infinity());
    Policy pi(n, 0);
    // Odometer over all |A|^|S| policies.
    while (true) {
        const ValueVector v = policy_values(dmdp, pi, target);
        for (std::size_t i = 0; i < n; ++i) best[i] = std::max(best[i], v[i]);

        std::size_t digit = 0;
        while (digit < n && ++pi[digit] == num_actions) pi[digit++] = 0;
        if (digit == n) break;
    }
    Policy greedy = greedy_policy(dmdp, best);
    return {std::move(best), std::move(greedy)};
}

double policy_suboptimality(const Dmdp& dmdp, std::span<const double> optimal_values,
                            std::span<const ActionIndex> policy, double target) {
    const ValueVector v = policy_values(dmdp, policy, target);
    return sup_distance(optimal_values, v);
}

} // namespace vrvi
