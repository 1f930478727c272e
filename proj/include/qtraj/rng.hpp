#pragma once

#include <cstdint>

namespace qtraj {

// Stateless counter-based generator: every draw is a hash of
// (seed, stream, index), so parallel sampling is order-independent and
// bit-reproducible for a given seed.
struct CounterRng {
    std::uint64_t seed = 0;

    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
        return mix(mix(seed ^ mix(stream)) + index);
    }

    // uniform in [0, 1)
    double uniform(std::uint64_t stream, std::uint64_t index) const {
        return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
    }
};

} // namespace qtraj
