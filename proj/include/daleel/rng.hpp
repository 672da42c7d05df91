#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace daleel::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Independent substream seed for (seed, a, b); stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ull * (a + 1);
    splitmix64(s);
    s ^= 0xbf58476d1ce4e5b9ull * (b + 1);
    std::uint64_t t = s;
    return splitmix64(t);
}

/// Small deterministic generator. The standard-library distributions are
/// implementation-defined, so sampling is done here to keep seeded artifacts
/// bit-reproducible.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, bound), rejection sampled to stay unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the first uniform is kept in (0, 1].
    double next_normal() {
        double u1 = 1.0 - next_unit();
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// Fisher-Yates permutation of {0..n-1}.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Engine eng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(eng.next_below(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

} // namespace daleel::rng
