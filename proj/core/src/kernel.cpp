#include "vrvi/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace vrvi {
namespace {

// Slack on the offset-accuracy precondition.
constexpr double kAccuracySlack = 1e-12;

void check_eps_delta(double eps, double delta) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("eps must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
}

/// Per-support-index hit counts for m draws from one row.
void draw_counts(const TransitionSampler::Row& row, std::uint64_t m, RngStream& rng,
                 SamplingMode mode, std::vector<std::uint64_t>& counts) {
    counts.assign(row.size, 0);
    if (mode == SamplingMode::per_draw) {
        for (std::uint64_t k = 0; k < m; ++k) ++counts[row.local_index(rng())];
        return;
    }
    std::uint64_t remaining = m;
    double mass = 1.0;
    for (std::uint32_t k = 0; k + 1 < row.size && remaining > 0; ++k) {
        const double p = mass > row.probs[k] ? row.probs[k] / mass : 1.0;
        std::binomial_distribution<std::uint64_t> bin(remaining, std::clamp(p, 0.0, 1.0));
        counts[k] = bin(rng);
        remaining -= counts[k];
        mass -= row.probs[k];
    }
    counts[row.size - 1] += remaining;
}

/// Sample mean of u over the drawn next states. Centered on the first support
/// value so that a constant u is reproduced exactly.
double sampled_mean(const TransitionSampler::Row& row, std::span<const double> u, std::uint64_t m,
                    RngStream& rng, SamplingMode mode, std::vector<std::uint64_t>& counts) {
    draw_counts(row, m, rng, mode, counts);
    const double ref = u[row.support[0]];
    double acc = 0.0;
    for (std::uint32_t k = 0; k < row.size; ++k)
        if (counts[k] != 0) acc += static_cast<double>(counts[k]) * (u[row.support[k]] - ref);
    return ref + acc / static_cast<double>(m);
}

/// Runs body(first_state, last_state) over contiguous state blocks.
template <class Body>
void for_state_blocks(std::size_t num_states, unsigned threads, Body&& body) {
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(num_states)));
    if (workers == 1) {
        body(std::size_t{0}, num_states);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (num_states + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(num_states, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
}

} // namespace

void SampleTally::charge(std::uint64_t n) {
    if (budget_ && (n > *budget_ || total_ > *budget_ - n))
        throw SampleBudgetExceeded(*budget_, total_ + n);
    total_ += n;
}

std::uint64_t hoeffding_sample_count(double bound, double eps, double delta) {
    check_eps_delta(eps, delta);
    if (!(bound >= 0.0)) throw PreconditionError("sample bound must be non-negative");
    if (bound == 0.0) return 0;
    const double m = std::ceil(2.0 * bound * bound / (eps * eps) * std::log(2.0 / delta));
    if (!(m < 0x1.0p62)) throw PreconditionError("Hoeffding sample count overflows");
    return static_cast<std::uint64_t>(m);
}

double apx_trans(std::span<const double> u, double bound, StateIndex i, ActionIndex a, double eps,
                 double delta, const TransitionSampler& sampler, RngStream& rng, SampleTally* tally,
                 SamplingMode mode) {
    if (u.size() != sampler.num_states()) throw DimensionError("apx_trans values", sampler.num_states(), u.size());
    if (i >= sampler.num_states() || a >= sampler.num_actions())
        throw PreconditionError("apx_trans state or action out of range");
    if (!(sup_norm(u) <= bound)) throw PreconditionError("apx_trans requires ||u||_inf <= bound");

    const std::uint64_t m = hoeffding_sample_count(bound, eps, delta);
    if (m == 0) return 0.0;
    if (tally) tally->charge(m);
    std::vector<std::uint64_t> counts;
    return sampled_mean(sampler.row(i, a), u, m, rng, mode, counts);
}

OffsetTable exact_offsets(const MdpModel& model, std::span<const double> v0) {
    if (v0.size() != model.num_states()) throw DimensionError("offset anchor", model.num_states(), v0.size());
    OffsetTable x{model.num_actions(), std::vector<double>(model.num_pairs()), 0.0,
                  ValueVector(v0.begin(), v0.end())};
    for (StateIndex i = 0; i < model.num_states(); ++i)
        for (ActionIndex a = 0; a < model.num_actions(); ++a)
            x.values[model.row_index(i, a)] = expected_next(model, i, a, v0);
    return x;
}

OffsetTable sampled_offsets(std::span<const double> v0, double eps, double delta,
                            SamplingContext& ctx, std::uint64_t round) {
    const auto& sampler = ctx.sampler;
    if (v0.size() != sampler.num_states()) throw DimensionError("offset anchor", sampler.num_states(), v0.size());
    const std::size_t pairs = sampler.num_states() * sampler.num_actions();
    const double bound = sup_norm(v0);
    const std::uint64_t m = hoeffding_sample_count(bound, eps, delta / static_cast<double>(pairs));

    OffsetTable x{sampler.num_actions(), std::vector<double>(pairs, 0.0), eps,
                  ValueVector(v0.begin(), v0.end())};
    if (m == 0) return x;
    ctx.tally.charge(m * pairs);

    for_state_blocks(sampler.num_states(), ctx.threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<std::uint64_t> counts;
        for (auto i = static_cast<StateIndex>(lo); i < hi; ++i) {
            for (ActionIndex a = 0; a < sampler.num_actions(); ++a) {
                RngStream rng(ctx.seed, {round, i, a});
                x.values[static_cast<std::size_t>(i) * sampler.num_actions() + a] =
                    sampled_mean(sampler.row(i, a), v0, m, rng, ctx.mode, counts);
            }
        }
    });
    return x;
}

Backup apx_val(const MdpModel& model, double discount, std::span<const double> u,
               std::span<const double> v0, const OffsetTable& x, double eps, double delta,
               SamplingContext& ctx, std::uint64_t round) {
    const std::size_t n = model.num_states();
    if (u.size() != n) throw DimensionError("apx_val values", n, u.size());
    if (v0.size() != n) throw DimensionError("apx_val anchor", n, v0.size());
    if (x.values.size() != model.num_pairs() || x.num_actions != model.num_actions())
        throw DimensionError("offset table", model.num_pairs(), x.values.size());
    if (!std::equal(v0.begin(), v0.end(), x.anchor.begin(), x.anchor.end()))
        throw PreconditionError("offset table is anchored at a different vector");
    check_eps_delta(eps, delta);
    if (x.accuracy > eps + kAccuracySlack)
        throw PreconditionError("offset accuracy exceeds the requested eps");

    ValueVector diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = u[j] - v0[j];
    const double bound = sup_norm(diff);
    const std::uint64_t m = hoeffding_sample_count(bound, eps, delta / static_cast<double>(model.num_pairs()));
    if (m > 0) ctx.tally.charge(m * model.num_pairs());

    Backup out{ValueVector(n), Policy(n)};
    for_state_blocks(n, ctx.threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<std::uint64_t> counts;
        for (auto i = static_cast<StateIndex>(lo); i < hi; ++i) {
            double best = 0.0;
            ActionIndex arg = 0;
            for (ActionIndex a = 0; a < model.num_actions(); ++a) {
                double s = x.at(i, a);
                if (m > 0) {
                    RngStream rng(ctx.seed, {round, i, a});
                    s += sampled_mean(ctx.sampler.row(i, a), diff, m, rng, ctx.mode, counts);
                }
                const double q = model.reward(i, a) + discount * s;
                if (a == 0 || q > best) {
                    best = q;
                    arg = a;
                }
            }
            out.values[i] = best;
            out.policy[i] = arg;
        }
    });
    return out;
}

Backup apx_mon_val(const Dmdp& dmdp, std::span<const double> u, std::span<const ActionIndex> pi,
                   std::span<const double> v0, const OffsetTable& x, double eps, double delta,
                   SamplingContext& ctx, std::uint64_t round) {
    check_policy(dmdp, pi);
    Backup q = apx_val(dmdp, u, v0, x, eps, delta, ctx, round);
    const double shift = 2.0 * dmdp.discount() * eps;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double lowered = q.values[i] - shift;
        if (lowered > u[i]) {
            q.values[i] = lowered;
        } else {
            q.values[i] = u[i];
            q.policy[i] = pi[i];
        }
    }
    return q;
}

} // namespace vrvi
