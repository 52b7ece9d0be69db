#pragma once

#include <cstdint>

namespace bltrend {

/// SplitMix64 (Steele, Lea & Flood 2014):
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound) by rejection: draws below
    /// (2^64 - bound) mod bound are discarded so every residue is equally likely.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Stream seed for one stratum: seed XOR (stratum * golden gamma), then one
/// SplitMix64 scramble so neighbouring strata are decorrelated.
inline std::uint64_t stream_seed(std::uint64_t seed, std::int64_t stratum) {
    SplitMix64 mix(seed ^ (static_cast<std::uint64_t>(stratum) * 0x9E3779B97F4A7C15ULL));
    return mix.next();
}

}  // namespace bltrend
