#pragma once

#include <cmath>
#include <cstdint>

namespace wigner {

/// Portable counter-based stream: output k (k = 1, 2, ...) is the SplitMix64
/// finalizer applied to seed + k * 0x9E3779B97F4A7C15. Identical to the
/// reference SplitMix64 generator started from `seed`.
class CounterStream {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    explicit constexpr CounterStream(std::uint64_t seed) noexcept : seed_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t next() noexcept { return mix(seed_ + (++counter_) * kGolden); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard exponential via inversion; finite because uniform() < 1.
    double exponential() noexcept { return -std::log1p(-uniform()); }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Seed for the index-th independent sample of a run seeded with `seed`.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return CounterStream::mix(seed + (index + 1) * CounterStream::kGolden);
}

}  // namespace wigner
