#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vrvi/errors.hpp"

namespace vrvi {

using StateIndex = std::uint32_t;
using ActionIndex = std::uint32_t;

/// Dense values indexed by state.
using ValueVector = std::vector<double>;

/// Stationary deterministic policy: one action index per state.
using Policy = std::vector<ActionIndex>;

/// One entry of a sparse transition row p_a(i).
struct Transition {
    StateIndex next;
    double prob;

    bool operator==(const Transition&) const = default;
};

/// Tolerance on sum_j p_a(i, j) = 1 accepted on input.
inline constexpr double kRowSumTolerance = 1e-9;

/**
 * Transition structure and rewards shared by the discounted and the
 * finite-horizon models.
 *
 * Rows are stored in compressed form, row (i, a) at index i * |A| + a.
 * The object is immutable after construction. Construction checks only
 * structural sizes; stochasticity and reward bounds are checked by validate().
 */
class MdpModel {
public:
    /// @param rows one sparse row per (state, action), ordered state-major
    /// @param rewards r_a(i) ordered state-major, |S| * |A| entries
    MdpModel(std::size_t num_states, std::size_t num_actions,
             const std::vector<std::vector<Transition>>& rows, std::vector<double> rewards,
             double reward_bound);

    std::size_t num_states() const noexcept { return num_states_; }
    std::size_t num_actions() const noexcept { return num_actions_; }
    std::size_t num_pairs() const noexcept { return num_states_ * num_actions_; }
    std::size_t row_index(StateIndex i, ActionIndex a) const noexcept {
        return static_cast<std::size_t>(i) * num_actions_ + a;
    }

    std::span<const StateIndex> support(StateIndex i, ActionIndex a) const noexcept {
        const auto r = row_index(i, a);
        return {next_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
    }
    std::span<const double> probs(StateIndex i, ActionIndex a) const noexcept {
        const auto r = row_index(i, a);
        return {prob_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
    }

    double reward(StateIndex i, ActionIndex a) const noexcept { return rewards_[row_index(i, a)]; }
    std::span<const double> rewards() const noexcept { return rewards_; }
    double reward_bound() const noexcept { return reward_bound_; }

    /// Total number of stored transition entries.
    std::size_t nnz() const noexcept { return next_.size(); }

    std::vector<Transition> row(StateIndex i, ActionIndex a) const;

    bool operator==(const MdpModel&) const = default;

private:
    std::size_t num_states_;
    std::size_t num_actions_;
    std::vector<std::size_t> offsets_;
    std::vector<StateIndex> next_;
    std::vector<double> prob_;
    std::vector<double> rewards_;
    double reward_bound_;
};

/// Discounted infinite-horizon MDP (S, A, P, r, gamma) with reward bound M.
class Dmdp : public MdpModel {
public:
    Dmdp(MdpModel model, double discount) : MdpModel(std::move(model)), discount_(discount) {}
    Dmdp(std::size_t num_states, std::size_t num_actions,
         const std::vector<std::vector<Transition>>& rows, std::vector<double> rewards,
         double discount, double reward_bound)
        : MdpModel(num_states, num_actions, rows, std::move(rewards), reward_bound),
          discount_(discount) {}

    double discount() const noexcept { return discount_; }

    /// M / (1 - gamma), the a-priori bound on |v*| and on every v_pi.
    double value_bound() const noexcept { return reward_bound() / (1.0 - discount_); }

    bool operator==(const Dmdp&) const = default;

private:
    double discount_;
};

/// Undiscounted finite-horizon MDP (S, A, P, r, H).
class FiniteHorizonMdp : public MdpModel {
public:
    FiniteHorizonMdp(MdpModel model, std::int64_t horizon)
        : MdpModel(std::move(model)), horizon_(horizon) {}

    std::int64_t horizon() const noexcept { return horizon_; }

    bool operator==(const FiniteHorizonMdp&) const = default;

private:
    std::int64_t horizon_;
};

/// Throws a ModelError subclass naming the first violated invariant.
void validate(const MdpModel& model);
void validate(const Dmdp& dmdp);
void validate(const FiniteHorizonMdp& fh);

/// Throws PreconditionError unless every action index is in range and the
/// policy has one entry per state.
void check_policy(const MdpModel& model, std::span<const ActionIndex> policy);

double sup_norm(std::span<const double> v);
double sup_distance(std::span<const double> a, std::span<const double> b);

} // namespace vrvi
