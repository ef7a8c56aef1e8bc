#pragma once

#include <cstdint>

namespace swarmdef {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Maps 64 random bits to the open interval (0, 1); never returns 0 or 1.
inline double bits_to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Counter-based uniform stream: each draw is a pure function of
/// (seed, step, slot), so results do not depend on evaluation order.
struct CounterRng {
    std::uint64_t seed = 0;
    std::uint64_t step = 0;
    std::uint64_t draws = 0;

    double uniform(std::uint64_t slot) {
        ++draws;
        std::uint64_t h = splitmix64(seed);
        h = splitmix64(h ^ step);
        h = splitmix64(h ^ slot);
        return bits_to_unit(h);
    }
};

}  // namespace swarmdef
