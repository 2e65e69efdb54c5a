#pragma once

// Counter-style randomness: every value is a pure function of
// (master seed, trial index, stream, counter) so trials can run in any order.

#include <cstdint>
#include <limits>

namespace revealment {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) { return mix(mix(a, b), c); }

/// Named streams, so input bits and algorithm coins never share a counter.
enum class Stream : std::uint64_t {
    input = 1,
    input_second = 2,
    coins = 3,
    coins_second = 4,
    spare = 5,
};

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, Stream s) {
    return mix(master, trial, static_cast<std::uint64_t>(s));
}

/// SplitMix64 generator; satisfies UniformRandomBitGenerator.
class SplitMix {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with
    /// rejection, so the result does not depend on the standard library.
    constexpr std::uint64_t below(std::uint64_t bound) {
        std::uint64_t x = (*this)();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

}  // namespace revealment
