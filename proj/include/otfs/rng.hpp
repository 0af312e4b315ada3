#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "otfs/types.hpp"

namespace otfs {

/// splitmix64 finalizer; good avalanche for combining stream coordinates.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from (master seed, coordinates...).
/// Streams for different coordinate tuples are uncorrelated in practice,
/// so frames and sweep points can run in any order.
inline std::uint64_t stream_seed(std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t c : coords) h = splitmix64(h ^ c);
    return h;
}

/// Deterministic RNG wrapper used everywhere a seed appears in an API.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    int bit() { return static_cast<int>(eng_() >> 63); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    double gaussian(double stddev) {
        return std::normal_distribution<double>(0.0, stddev)(eng_);
    }

    /// Circularly-symmetric complex Gaussian with total variance `var`
    /// (var/2 per real component).
    Complex complex_gaussian(double var) {
        const double s = std::sqrt(var / 2.0);
        const double re = gaussian(s);
        const double im = gaussian(s);
        return {re, im};
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace otfs
