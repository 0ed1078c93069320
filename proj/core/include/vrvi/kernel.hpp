#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vrvi/bellman.hpp"
#include "vrvi/mdp.hpp"
#include "vrvi/rng.hpp"
#include "vrvi/sampler.hpp"

namespace vrvi {

/// How the m draws of one estimator are produced. Both modes yield the same
/// distribution of the estimate; multinomial draws the per-state hit counts
/// with conditional binomials instead of m alias lookups.
enum class SamplingMode { per_draw, multinomial };

/// Exact count of transition samples, with an optional hard budget.
class SampleTally {
public:
    SampleTally() = default;
    explicit SampleTally(std::optional<std::uint64_t> budget) : budget_(budget) {}

    /// Records n samples about to be drawn. Throws SampleBudgetExceeded, leaving
    /// the tally unchanged, if that would overrun the budget.
    void charge(std::uint64_t n);

    std::uint64_t total() const noexcept { return total_; }
    std::optional<std::uint64_t> budget() const noexcept { return budget_; }

private:
    std::uint64_t total_ = 0;
    std::optional<std::uint64_t> budget_;
};

/// Shared state of every sampled operator call inside one solver run.
struct SamplingContext {
    const TransitionSampler& sampler;
    std::uint64_t seed = 0;
    SampleTally tally{};
    SamplingMode mode = SamplingMode::per_draw;
    /// Worker threads for the (state, action) fan-out; <= 1 runs inline.
    unsigned threads = 1;
};

/// m = ceil(2 M^2 / eps^2 * ln(2 / delta)), and 0 when M = 0.
std::uint64_t hoeffding_sample_count(double bound, double eps, double delta);

/**
 * Mean of m sampled entries u_j, j ~ p_a(i), with m from hoeffding_sample_count.
 * |result - p_a(i)^T u| <= eps with probability at least 1 - delta.
 *
 * Requires ||u||_inf <= bound (checked). bound = 0 returns 0 without sampling.
 */
double apx_trans(std::span<const double> u, double bound, StateIndex i, ActionIndex a, double eps,
                 double delta, const TransitionSampler& sampler, RngStream& rng,
                 SampleTally* tally = nullptr, SamplingMode mode = SamplingMode::per_draw);

/// Estimates x_a(i) ~ p_a(i)^T v0 with promised accuracy, anchored at v0.
struct OffsetTable {
    std::size_t num_actions = 0;
    std::vector<double> values;
    double accuracy = 0.0;
    ValueVector anchor;

    double at(StateIndex i, ActionIndex a) const noexcept {
        return values[static_cast<std::size_t>(i) * num_actions + a];
    }
};

/// x_a(i) = p_a(i)^T v0 for every pair; accuracy 0.
OffsetTable exact_offsets(const MdpModel& model, std::span<const double> v0);

/// One apx_trans per pair with bound ||v0||_inf and failure budget
/// delta / (|S||A|); all entries within eps with probability >= 1 - delta.
OffsetTable sampled_offsets(std::span<const double> v0, double eps, double delta,
                            SamplingContext& ctx, std::uint64_t round);

/**
 * Sampled value operator with offsets.
 *
 * For each pair, S_a(i) = x_a(i) + apx_trans(u - v0, ||u - v0||, i, a, eps,
 * delta / (|S||A|)); the result is the max over a of r_a(i) + discount * S_a(i)
 * and its argmax (lowest index on ties). With probability >= 1 - delta it is
 * within discount * (eps + x.accuracy) of T(u) and of T_pi(u).
 *
 * Streams are keyed by (round, i, a); identical inputs replay bit-exactly for
 * any thread count.
 */
Backup apx_val(const MdpModel& model, double discount, std::span<const double> u,
               std::span<const double> v0, const OffsetTable& x, double eps, double delta,
               SamplingContext& ctx, std::uint64_t round);

inline Backup apx_val(const Dmdp& dmdp, std::span<const double> u, std::span<const double> v0,
                      const OffsetTable& x, double eps, double delta, SamplingContext& ctx,
                      std::uint64_t round) {
    return apx_val(dmdp, dmdp.discount(), u, v0, x, eps, delta, ctx, round);
}

/**
 * Monotone variant: runs apx_val and keeps, per state, the shifted estimate
 * q_i - 2 gamma eps only when it exceeds u_i, otherwise (u_i, pi_i).
 * The output never decreases below u. Callers maintain T_pi(u) >= u.
 */
Backup apx_mon_val(const Dmdp& dmdp, std::span<const double> u, std::span<const ActionIndex> pi,
                   std::span<const double> v0, const OffsetTable& x, double eps, double delta,
                   SamplingContext& ctx, std::uint64_t round);

} // namespace vrvi
