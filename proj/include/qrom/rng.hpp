#ifndef QROM_RNG_HPP
#define QROM_RNG_HPP

#include <cstdint>

namespace qrom {

/// splitmix64 (Steele/Lea/Flood); tiny, platform-stable stream used for all
/// randomness so seeded runs are bit-reproducible everywhere.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n). Modulo bias is < 2^-50 for the n used here.
    std::uint64_t next_below(std::uint64_t n) { return next() % n; }
};

/// Derive an independent sub-seed from (seed, index); used for per-shot and
/// per-address streams so work units are order-independent.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 rng(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
    return rng.next();
}

}  // namespace qrom

#endif
