#pragma once

#include <cstdint>

namespace sesav {

/// SplitMix64 (Steele-Lea-Vigna mixer). Chosen as the project's pinned PRNG
/// for initial data: the output stream is fully determined by the seed and is
/// identical across platforms and standard-library versions, which keeps runs
/// byte-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 mantissa bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace sesav
