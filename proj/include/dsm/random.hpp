#ifndef DSM_RANDOM_HPP
#define DSM_RANDOM_HPP

#include <cstdint>
#include <random>

#include "dsm/linalg.hpp"

// Seeded draws used by sampling-based checks and noise injection. All
// randomness in the library flows through here so that runs are
// reproducible bit-for-bit from a single seed.

namespace dsm {

/// Derive an independent stream seed from (base, index); splitmix64 mix.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

/// Standard Gaussian vector.
Vector gaussian_vector(std::size_t dim, std::mt19937_64& rng);

/// Uniform on the unit sphere (normalized Gaussian).
Vector unit_sphere_vector(std::size_t dim, std::mt19937_64& rng);

/// Uniform in the ball of the given radius.
Vector ball_vector(std::size_t dim, double radius, std::mt19937_64& rng);

}  // namespace dsm

#endif  // DSM_RANDOM_HPP
