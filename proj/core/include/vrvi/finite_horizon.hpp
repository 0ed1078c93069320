#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vrvi/mdp.hpp"
#include "vrvi/solvers.hpp"

namespace vrvi {

/// Time-indexed policy pi(i, h) together with the value vectors it was built from.
struct NonStationaryPolicy {
    /// actions[h][i] for h in [0, H).
    std::vector<Policy> actions;
    /// values[h] for h in [0, H]; values[H] is the terminal vector.
    std::vector<ValueVector> values;

    std::size_t horizon() const noexcept { return actions.size(); }
};

struct FhSolveReport : RunTelemetry {
    NonStationaryPolicy solution;
    std::optional<double> policy_suboptimality;
};

/// Exact undiscounted backups v_h = max_a [r_a + P_a v_{h+1}] from v_H = terminal,
/// over the instance horizon.
NonStationaryPolicy exact_backward_induction(const FiniteHorizonMdp& fh,
                                             std::span<const double> terminal);

/// Values at h = 0 of following `actions` for actions.size() steps, then terminal.
ValueVector evaluate_nonstationary(const MdpModel& model, std::span<const Policy> actions,
                                   std::span<const double> terminal);

/// max_i (v*_0(i) - v^pi_0(i)), both with the same terminal vector.
double nonstationary_suboptimality(const FiniteHorizonMdp& fh, std::span<const double> optimal_values,
                                   std::span<const Policy> actions, std::span<const double> terminal);

/**
 * Sampled backward induction over H steps. v0 is both the terminal vector and
 * the offset anchor; each step is one apx_val at accuracy eps / (2H) and
 * failure budget delta / H with discount 1.
 */
FhSolveReport randomized_finite_horizon_vi(const FiniteHorizonMdp& fh, std::span<const double> v0,
                                           std::int64_t horizon, double eps, double delta,
                                           const RunOptions& options = {});

/**
 * Blocked variant from terminal value 0. Blocks of `block` steps are processed
 * from the end; the earliest block holds the H mod L remainder. Each block
 * re-anchors on its entry vector with exact offsets and gets eps * len / H and
 * delta * len / H. block = H reproduces randomized_finite_horizon_vi exactly.
 */
FhSolveReport variance_reduced_finite_horizon_vi(const FiniteHorizonMdp& fh, std::int64_t horizon,
                                                 std::int64_t block, double eps, double delta,
                                                 const RunOptions& options = {});

/// clamp(floor(cbrt(eps^2 |S| / (H^2 M^2))), 1, H).
std::int64_t fh_block_length(double eps, std::size_t num_states, std::int64_t horizon,
                             double reward_bound);

} // namespace vrvi
