#pragma once

#include <cstdint>
#include <random>

namespace evt {

/// SplitMix64 finalizer; used to derive independent per-replicate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic stream of uniforms on the open interval (0, 1).
///
/// A stream is identified by (seed, index): replicate r of a simulation
/// always reads stream (seed, r), so results do not depend on how the
/// replicates are scheduled across threads.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed, std::uint64_t index = 0) {
        const std::uint64_t k0 = splitmix64(seed);
        const std::uint64_t k1 = splitmix64(k0 ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
        const std::uint64_t k2 = splitmix64(k1);
        std::seed_seq seq{static_cast<std::uint32_t>(k1), static_cast<std::uint32_t>(k1 >> 32),
                          static_cast<std::uint32_t>(k2), static_cast<std::uint32_t>(k2 >> 32)};
        engine_.seed(seq);
    }

    /// (k + 1/2) / 2^53 for a 53-bit integer k: never exactly 0 or 1.
    double next() {
        const std::uint64_t bits = engine_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double operator()() { return next(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace evt
