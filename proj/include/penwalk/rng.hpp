// SplitMix64: the library's only random source.  Counter-style derivation of
// per-chain streams keeps every report a pure function of (seed, parameters)
// regardless of how chains are scheduled.
#pragma once

#include <cstdint>

namespace penwalk {

inline constexpr const char* kGeneratorId = "splitmix64";

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }
};

// Stream for chain `index` under master `seed`; chains are independent given
// distinct indices and identical regardless of evaluation order.
inline SplitMix64 chain_stream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    g.next();
    g.next();
    return g;
}

}  // namespace penwalk
