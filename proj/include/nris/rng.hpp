// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace nris {

/// SplitMix64 finaliser. Used to derive independent stream seeds.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream tags. The numeric values are part of the replay format.
enum class StreamTag : std::uint64_t {
    kRealization = 0,
    kBsRis = 1,
    kRisMs = 2,
    kBsMsDirect = 3,
    kRandomPhase = 4,
    kInitPhase = 5,
    kCalibration = 6,
};

/// seed = splitmix64(splitmix64(splitmix64(master) ^ index) ^ tag)
inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                                           StreamTag tag) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ index);
    return splitmix64(h ^ static_cast<std::uint64_t>(tag));
}

/// Seeded random stream. Uniform variates are built directly from the
/// 64-bit engine output so draws are identical across standard libraries
/// (std::uniform_real_distribution is implementation-defined).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace nris
