#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace evotse {

// splitmix64; used to derive independent stream seeds from a base seed
// plus a label, so distinct consumers never share RNG state.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t seed_for(std::uint64_t base, std::string_view label,
                              std::uint64_t index = 0) {
    std::uint64_t h = mix64(base);
    for (char c : label) {
        h = mix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    }
    return mix64(h ^ index);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t base, std::string_view label, std::uint64_t index = 0) {
    return Rng(seed_for(base, label, index));
}

} // namespace evotse
