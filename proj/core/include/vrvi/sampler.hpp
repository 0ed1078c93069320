#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vrvi/mdp.hpp"
#include "vrvi/rng.hpp"

namespace vrvi {

namespace detail {
__extension__ typedef unsigned __int128 Uint128;
} // namespace detail

/**
 * Alias tables (Vose) for every transition row, built over the row's sparse
 * support. A draw costs one 64-bit uniform, one comparison and one lookup:
 * the integer part of u * support_size picks the column, the fractional part
 * is the biased coin against that column's threshold.
 */
class TransitionSampler {
public:
    /// Lightweight view of one row's tables for tight sampling loops.
    struct Row {
        const std::uint64_t* threshold;
        const std::uint32_t* alias;
        const StateIndex* support;
        const double* probs;
        std::uint32_t size;

        /// Index into `support` for the raw 64-bit draw `bits`.
        std::uint32_t local_index(std::uint64_t bits) const noexcept {
            const auto product = static_cast<detail::Uint128>(bits) * size;
            const auto column = static_cast<std::uint32_t>(product >> 64);
            const auto coin = static_cast<std::uint64_t>(product);
            const std::uint32_t other = alias[column];
            const auto keep = static_cast<std::uint32_t>(coin < threshold[column]);
            return other ^ ((column ^ other) & (0U - keep));
        }
    };

    /// Builds the tables without validating the model; see build_sampler().
    explicit TransitionSampler(const MdpModel& model);

    std::size_t num_states() const noexcept { return num_states_; }
    std::size_t num_actions() const noexcept { return num_actions_; }

    Row row(StateIndex i, ActionIndex a) const noexcept {
        const auto r = static_cast<std::size_t>(i) * num_actions_ + a;
        const auto begin = offsets_[r];
        return {threshold_.data() + begin, alias_.data() + begin, next_.data() + begin,
                source_prob_.data() + begin, static_cast<std::uint32_t>(offsets_[r + 1] - begin)};
    }

    StateIndex sample(StateIndex i, ActionIndex a, RngStream& rng) const noexcept {
        const Row r = row(i, a);
        return r.support[r.local_index(rng())];
    }

    /// Alias-table probability of each column (before scaling to 64 bits).
    std::span<const double> column_probabilities(StateIndex i, ActionIndex a) const noexcept;
    std::span<const std::uint32_t> aliases(StateIndex i, ActionIndex a) const noexcept;

    /// Categorical distribution implied by the alias table of row (i, a),
    /// one entry per support element.
    std::vector<Transition> reconstruct(StateIndex i, ActionIndex a) const;

private:
    std::size_t num_states_;
    std::size_t num_actions_;
    std::vector<std::size_t> offsets_;
    std::vector<StateIndex> next_;
    std::vector<double> source_prob_;
    std::vector<double> column_prob_;
    std::vector<std::uint64_t> threshold_;
    std::vector<std::uint32_t> alias_;
};

/// Validates the model and builds its sampler in O(nnz).
TransitionSampler build_sampler(const Dmdp& dmdp);
TransitionSampler build_sampler(const FiniteHorizonMdp& fh);

inline StateIndex sample_next_state(const TransitionSampler& sampler, StateIndex i, ActionIndex a,
                                    RngStream& rng) noexcept {
    return sampler.sample(i, a, rng);
}

} // namespace vrvi
