#include "vrvi/sampler.hpp"

#include <cmath>
#include <limits>

namespace vrvi {
namespace {

std::uint64_t to_threshold(double p) {
    if (p >= 1.0) return std::numeric_limits<std::uint64_t>::max();
    if (p <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

} // namespace

TransitionSampler::TransitionSampler(const MdpModel& model)
    : num_states_(model.num_states()), num_actions_(model.num_actions()) {
    offsets_.reserve(model.num_pairs() + 1);
    offsets_.push_back(0);
    next_.reserve(model.nnz());
    source_prob_.reserve(model.nnz());
    column_prob_.resize(model.nnz());
    threshold_.resize(model.nnz());
    alias_.resize(model.nnz());

    std::vector<double> scaled;
    std::vector<std::uint32_t> small, large;
    for (StateIndex i = 0; i < model.num_states(); ++i) {
        for (ActionIndex a = 0; a < model.num_actions(); ++a) {
            const auto s = model.support(i, a);
            const auto p = model.probs(i, a);
            const std::size_t base = next_.size();
            const auto n = static_cast<std::uint32_t>(s.size());
            next_.insert(next_.end(), s.begin(), s.end());
            source_prob_.insert(source_prob_.end(), p.begin(), p.end());

            scaled.assign(n, 0.0);
            small.clear();
            large.clear();
            for (std::uint32_t k = 0; k < n; ++k) {
                scaled[k] = p[k] * n;
                (scaled[k] < 1.0 ? small : large).push_back(k);
            }
            // Vose: pair each under-full column with an over-full donor.
            while (!small.empty() && !large.empty()) {
                const auto lo = small.back();
                small.pop_back();
                const auto hi = large.back();
                column_prob_[base + lo] = scaled[lo];
                alias_[base + lo] = hi;
                scaled[hi] = (scaled[hi] + scaled[lo]) - 1.0;
                if (scaled[hi] < 1.0) {
                    large.pop_back();
                    small.push_back(hi);
                }
            }
            // Leftovers are full columns up to rounding.
            for (auto k : large) {
                column_prob_[base + k] = 1.0;
                alias_[base + k] = k;
            }
            for (auto k : small) {
                column_prob_[base + k] = 1.0;
                alias_[base + k] = k;
            }
            for (std::uint32_t k = 0; k < n; ++k)
                threshold_[base + k] = to_threshold(column_prob_[base + k]);
            offsets_.push_back(next_.size());
        }
    }
}

std::span<const double> TransitionSampler::column_probabilities(StateIndex i, ActionIndex a) const noexcept {
    const auto r = static_cast<std::size_t>(i) * num_actions_ + a;
    return {column_prob_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
}

std::span<const std::uint32_t> TransitionSampler::aliases(StateIndex i, ActionIndex a) const noexcept {
    const auto r = static_cast<std::size_t>(i) * num_actions_ + a;
    return {alias_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
}

std::vector<Transition> TransitionSampler::reconstruct(StateIndex i, ActionIndex a) const {
    const Row r = row(i, a);
    const auto cols = column_probabilities(i, a);
    std::vector<Transition> out(r.size);
    for (std::uint32_t k = 0; k < r.size; ++k) out[k] = {r.support[k], 0.0};
    for (std::uint32_t k = 0; k < r.size; ++k) {
        out[k].prob += cols[k] / r.size;
        out[r.alias[k]].prob += (1.0 - cols[k]) / r.size;
    }
    return out;
}

TransitionSampler build_sampler(const Dmdp& dmdp) {
    validate(dmdp);
    return TransitionSampler(dmdp);
}

TransitionSampler build_sampler(const FiniteHorizonMdp& fh) {
    validate(fh);
    return TransitionSampler(fh);
}

} // namespace vrvi
