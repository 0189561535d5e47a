#pragma once

#include <cstdint>
#include <random>

namespace posgame {

// All randomness in the project flows through mt19937_64 seeded explicitly.
// Draws below avoid std:: distributions so that identical seeds give
// identical streams on every standard library.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    return splitmix64(a ^ splitmix64(b + 0x632be59bd9b4e019ULL));
}

// uniform draw from [0, n), n >= 1
inline std::uint64_t uniform_below(Rng& g, std::uint64_t n)
{
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(g()) * n) >> 64);
}

inline bool chance(Rng& g, double p)
{
    if (p <= 0.0)
        return false;
    if (p >= 1.0)
        return true;
    const double bits53 = 9007199254740992.0; // 2^53
    return static_cast<double>(g() >> 11) < p * bits53;
}

} // namespace posgame
