#include "cyclodetect/rng.hpp"

#include <cmath>

namespace cyclodetect {

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

Rng::Rng(std::uint64_t seed)
{
    std::uint64_t s = seed;
    for (auto& word : state_) {
        word = splitmix64(s);
    }
}

std::uint64_t Rng::next_u64()
{
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; 1 - u keeps the log argument strictly positive.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

cdouble Rng::cgaussian()
{
    const double re = gaussian();
    const double im = gaussian();
    return cdouble(re, im) * M_SQRT1_2;
}

cdouble Rng::qpsk_symbol()
{
    const std::uint64_t bits = next_u64();
    const double re = (bits & 1u) ? M_SQRT1_2 : -M_SQRT1_2;
    const double im = (bits & 2u) ? M_SQRT1_2 : -M_SQRT1_2;
    return cdouble(re, im);
}

std::uint64_t derive_seed(std::uint64_t root,
                          std::initializer_list<std::uint64_t> salts)
{
    std::uint64_t x = root;
    std::uint64_t h = splitmix64(x);
    for (std::uint64_t salt : salts) {
        x ^= salt + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
        h ^= splitmix64(x);
    }
    return h;
}

} // namespace cyclodetect
