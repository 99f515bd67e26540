#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace slads {

// Stable seed derivation (splitmix64 steps). Sub-tasks get independent
// streams from (seed, task indices) without coupling to execution order.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
    uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0x517cc1b727220a95ULL * (b + 1);
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Unbiased draw in [0, n). Hand-rolled rejection instead of
// std::uniform_int_distribution, whose output is implementation-defined;
// reproducibility across standard libraries is a contract here.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// First `count` elements of a Fisher-Yates shuffle of 0..n-1, i.e. a uniform
// ordered sample without replacement.
inline std::vector<int64_t> sample_distinct(int64_t n, int64_t count, std::mt19937_64& rng) {
    std::vector<int64_t> idx(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    for (int64_t i = 0; i < count; ++i) {
        const int64_t j = i + static_cast<int64_t>(uniform_below(rng, static_cast<uint64_t>(n - i)));
        std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    }
    idx.resize(static_cast<size_t>(count));
    return idx;
}

} // namespace slads
