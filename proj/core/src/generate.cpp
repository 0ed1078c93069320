#include "vrvi/generate.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace vrvi {
namespace {

std::vector<StateIndex> row_support(const GeneratorSpec& spec, StateIndex i, std::mt19937_64& rng,
                                    std::vector<StateIndex>& scratch) {
    const auto n = static_cast<StateIndex>(spec.num_states);
    switch (spec.family) {
    case InstanceFamily::dense_random: {
        std::vector<StateIndex> all(n);
        std::iota(all.begin(), all.end(), StateIndex{0});
        return all;
    }
    case InstanceFamily::sparse_random: {
        // Partial Fisher-Yates over a persistent permutation buffer.
        for (std::size_t k = 0; k < spec.support; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, n - 1);
            std::swap(scratch[k], scratch[pick(rng)]);
        }
        std::vector<StateIndex> out(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(spec.support));
        std::sort(out.begin(), out.end());
        return out;
    }
    case InstanceFamily::chain:
        if (i + 1 < n) return {i, i + 1};
        return {i};
    case InstanceFamily::tree: {
        std::vector<StateIndex> out;
        for (std::size_t c = 2 * std::size_t{i} + 1; c <= 2 * std::size_t{i} + 2 && c < n; ++c)
            out.push_back(static_cast<StateIndex>(c));
        if (out.empty()) out.push_back(i);
        return out;
    }
    }
    return {};
}

MdpModel generate_model(const GeneratorSpec& spec) {
    if (spec.num_states == 0 || spec.num_actions == 0)
        throw PreconditionError("generator needs at least one state and one action");
    if (spec.num_states > std::numeric_limits<StateIndex>::max())
        throw PreconditionError("too many states");
    if (!(spec.reward_bound > 0.0)) throw PreconditionError("reward bound must be positive");
    if (spec.family == InstanceFamily::sparse_random && (spec.support == 0 || spec.support > spec.num_states))
        throw PreconditionError("sparse support must lie in [1, num_states]");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> reward(-spec.reward_bound, spec.reward_bound);

    std::vector<StateIndex> scratch(spec.num_states);
    std::iota(scratch.begin(), scratch.end(), StateIndex{0});

    std::vector<std::vector<Transition>> rows;
    rows.reserve(spec.num_states * spec.num_actions);
    std::vector<double> rewards;
    rewards.reserve(spec.num_states * spec.num_actions);
    for (std::size_t i = 0; i < spec.num_states; ++i) {
        for (std::size_t a = 0; a < spec.num_actions; ++a) {
            const auto support = row_support(spec, static_cast<StateIndex>(i), rng, scratch);
            std::vector<double> w(support.size());
            double total = 0.0;
            for (double& x : w) {
                x = 1.0 - unit(rng);
                total += x;
            }
            std::vector<Transition> row;
            row.reserve(support.size());
            for (std::size_t k = 0; k < support.size(); ++k) row.push_back({support[k], w[k] / total});
            rows.push_back(std::move(row));
            rewards.push_back(std::clamp(reward(rng), -spec.reward_bound, spec.reward_bound));
        }
    }
    return MdpModel(spec.num_states, spec.num_actions, rows, std::move(rewards), spec.reward_bound);
}

class Fnv1a {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < n; ++k) {
            h_ ^= p[k];
            h_ *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
        return buf;
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

void hash_model(Fnv1a& h, const MdpModel& m) {
    h.u64(m.num_states());
    h.u64(m.num_actions());
    h.f64(m.reward_bound());
    for (double r : m.rewards()) h.f64(r);
    for (StateIndex i = 0; i < m.num_states(); ++i) {
        for (ActionIndex a = 0; a < m.num_actions(); ++a) {
            const auto s = m.support(i, a);
            const auto p = m.probs(i, a);
            h.u64(s.size());
            for (std::size_t k = 0; k < s.size(); ++k) {
                h.u64(s[k]);
                h.f64(p[k]);
            }
        }
    }
}

} // namespace

std::string_view family_name(InstanceFamily family) {
    switch (family) {
    case InstanceFamily::dense_random: return "dense-random";
    case InstanceFamily::sparse_random: return "sparse-random";
    case InstanceFamily::chain: return "chain";
    case InstanceFamily::tree: return "tree";
    }
    return "unknown";
}

InstanceFamily parse_family(std::string_view name) {
    for (auto f : {InstanceFamily::dense_random, InstanceFamily::sparse_random, InstanceFamily::chain,
                   InstanceFamily::tree})
        if (family_name(f) == name) return f;
    throw PreconditionError("unknown instance family: " + std::string(name));
}

Dmdp generate(const GeneratorSpec& spec) {
    Dmdp d(generate_model(spec), spec.discount);
    validate(d);
    return d;
}

FiniteHorizonMdp generate_finite_horizon(const GeneratorSpec& spec) {
    FiniteHorizonMdp fh(generate_model(spec), spec.horizon);
    validate(fh);
    return fh;
}

std::string fingerprint(const Dmdp& dmdp) {
    Fnv1a h;
    h.bytes("dmdp", 4);
    hash_model(h, dmdp);
    h.f64(dmdp.discount());
    return h.hex();
}

std::string fingerprint(const FiniteHorizonMdp& fh) {
    Fnv1a h;
    h.bytes("fhmdp", 5);
    hash_model(h, fh);
    h.u64(static_cast<std::uint64_t>(fh.horizon()));
    return h.hex();
}

} // namespace vrvi
