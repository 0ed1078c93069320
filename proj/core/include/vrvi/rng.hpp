#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace vrvi {

/// Identifies one independent random stream inside a solver run.
struct StreamKey {
    std::uint64_t round = 0;
    std::uint32_t state = 0;
    std::uint32_t action = 0;

    bool operator==(const StreamKey&) const = default;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * xoshiro256++ generator whose state is derived from (master seed, key)
 * without any shared counter, so streams for different (round, state, action)
 * keys can be created in any order, on any thread, and replay identically.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, StreamKey key) noexcept {
        std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
        h = mix64(h ^ key.round);
        h = mix64(h ^ ((static_cast<std::uint64_t>(key.state) << 32) | key.action));
        for (auto& word : state_) {
            h += 0x9e3779b97f4a7c15ULL;
            word = mix64(h);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t out = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return out;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace vrvi
