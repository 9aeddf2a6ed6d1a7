#pragma once

#include <cstdint>
#include <span>

namespace ged {

// splitmix64: identical sequences on every platform for a given seed.
// The simulator draws states, messages and types from separate streams so
// that changing one concern never perturbs the others.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Index draw from non-negative weights summing to ~1.
    int categorical(std::span<const double> weights) {
        double u = uniform01();
        double acc = 0.0;
        int last = 0;
        for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
            if (weights[i] <= 0.0) continue;
            acc += weights[i];
            last = i;
            if (u < acc) return i;
        }
        return last;  // u fell into rounding slack at the top
    }

private:
    std::uint64_t state_;
};

// Stream k is seeded with the (k+1)-th output of a seeder keyed by `seed`.
inline SplitMix64 make_stream(std::uint64_t seed, std::uint64_t concern) {
    SplitMix64 seeder(seed);
    std::uint64_t s = 0;
    for (std::uint64_t i = 0; i <= concern; ++i) s = seeder.next();
    return SplitMix64(s);
}

inline constexpr std::uint64_t kStateStream = 0;
inline constexpr std::uint64_t kMessageStream = 1;
inline constexpr std::uint64_t kTypeStream = 2;

}  // namespace ged
