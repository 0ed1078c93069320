#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "vrvi/mdp.hpp"

namespace vrvi {

/// dense-random: full rows. sparse-random: `support` distinct next states per row.
/// chain: i -> {i, i+1}, last state absorbing. tree: i -> children {2i+1, 2i+2}, leaves absorbing.
enum class InstanceFamily { dense_random, sparse_random, chain, tree };

std::string_view family_name(InstanceFamily family);
/// Throws PreconditionError on an unknown name.
InstanceFamily parse_family(std::string_view name);

struct GeneratorSpec {
    InstanceFamily family = InstanceFamily::dense_random;
    std::size_t num_states = 10;
    std::size_t num_actions = 2;
    /// Row support size for sparse-random.
    std::size_t support = 3;
    double reward_bound = 1.0;
    double discount = 0.9;
    std::int64_t horizon = 10;
    std::uint64_t seed = 0;
};

/// Output depends only on `spec`. Rewards are uniform in [-M, M]; row weights are
/// uniform in (0, 1] on the family's support, then normalized.
Dmdp generate(const GeneratorSpec& spec);
FiniteHorizonMdp generate_finite_horizon(const GeneratorSpec& spec);

/// 64-bit FNV-1a over the full instance content, as 16 hex digits.
std::string fingerprint(const Dmdp& dmdp);
std::string fingerprint(const FiniteHorizonMdp& fh);

} // namespace vrvi
