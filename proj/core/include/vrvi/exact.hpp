#pragma once

#include <cstdint>
#include <span>

#include "vrvi/mdp.hpp"

namespace vrvi {

inline constexpr std::uint64_t kDefaultIterationCap = 10'000'000;

/// Largest |S| for which policy_values uses a direct linear solve.
inline constexpr std::size_t kDirectSolveMaxStates = 2000;

/// Size limits of the policy-enumeration oracle.
inline constexpr std::size_t kBruteForceMaxStates = 6;
inline constexpr std::size_t kBruteForceMaxActions = 3;

struct ExactViResult {
    ValueVector values;
    std::uint64_t iterations = 0;
};

/**
 * Classic value iteration v <- T(v) from v0.
 *
 * Stops once the Bellman residual ||T(v) - v|| drops to target * (1 - gamma) / gamma
 * and returns T(v), which is then within `target` of v* by the contraction
 * property. Throws IterationLimitError after max_iterations backups.
 */
ExactViResult exact_value_iteration(const Dmdp& dmdp, std::span<const double> v0, double target,
                                    std::uint64_t max_iterations = kDefaultIterationCap);

/// v_pi within `target`: direct solve of (I - gamma P_pi) v = r_pi up to
/// kDirectSolveMaxStates states, fixed-point iteration beyond that.
ValueVector policy_values(const Dmdp& dmdp, std::span<const ActionIndex> policy, double target,
                          std::uint64_t max_iterations = kDefaultIterationCap);

enum class OracleMode { value_iteration, brute_force };

struct OptimalSolution {
    ValueVector values;
    Policy policy;
};

/// Ground truth (v*, pi*) for tests and verification. brute_force enumerates
/// all |A|^|S| policies and is limited to small instances.
OptimalSolution optimal_oracle(const Dmdp& dmdp, double target,
                               OracleMode mode = OracleMode::value_iteration);

/// ||v* - v_pi||_inf with v_pi evaluated at `target`.
double policy_suboptimality(const Dmdp& dmdp, std::span<const double> optimal_values,
                            std::span<const ActionIndex> policy, double target);

} // namespace vrvi
