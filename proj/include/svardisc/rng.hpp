#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace svardisc {

// splitmix64 step; used to derive independent streams from (seed, salt...) tuples.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x8f1bbcdcbfa53e0bull;
    for (auto p : parts) h = splitmix64(h ^ p);
    return h;
}

inline std::mt19937_64 make_rng(std::initializer_list<std::uint64_t> parts) {
    return std::mt19937_64(mix_seed(parts));
}

// Deterministic Fisher-Yates on [first, last).
template <typename It, typename Rng>
void seeded_shuffle(It first, It last, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        std::uniform_int_distribution<std::uint64_t> pick(0, i - 1);
        std::swap(first[i - 1], first[pick(rng)]);
    }
}

}  // namespace svardisc
