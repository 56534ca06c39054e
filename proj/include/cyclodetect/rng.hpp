#pragma once

#include <cstdint>
#include <initializer_list>

#include "cyclodetect/types.hpp"

namespace cyclodetect {

// Deterministic generator used by every randomized component. xoshiro256++
// core seeded through splitmix64, Gaussians by Box-Muller: the byte stream is
// fully pinned by the seed, independent of platform libm quirks in
// std::normal_distribution.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Standard normal (mean 0, variance 1).
    double gaussian();

    // Proper complex Gaussian, E|w|^2 = 1, E[w^2] = 0.
    cdouble cgaussian();

    // One of {+1+1j, +1-1j, -1+1j, -1-1j} / sqrt(2).
    cdouble qpsk_symbol();

private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Counter-based seed derivation: statistically independent streams for
// (root, salts...) without any coordination between parallel trials.
std::uint64_t derive_seed(std::uint64_t root,
                          std::initializer_list<std::uint64_t> salts);

} // namespace cyclodetect
