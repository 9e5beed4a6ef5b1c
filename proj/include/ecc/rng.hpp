#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ecc {

// splitmix64 step; used to scramble seeds before feeding the engine.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Independent stream derivation rule: stream i of master seed s is the engine
// seeded with splitmix64 applied twice to (s, i). Workers running parallel
// trials each get their own stream index.
inline std::mt19937_64 make_rng(std::uint64_t master_seed, std::uint64_t stream = 0) {
    std::uint64_t x = master_seed;
    std::uint64_t a = splitmix64(x);
    x ^= (stream + 1) * 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64(x);
    return std::mt19937_64(a ^ (b + 0x9E3779B97F4A7C15ULL));
}

// Unbiased integer in [0, n). Our own rejection sampler so that transcripts do
// not depend on the standard library's uniform_int_distribution.
template <class URBG>
std::uint64_t uniform_below(URBG& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    for (;;) {
        std::uint64_t x = rng();
        if (x < limit) return x % n;
    }
}

template <class URBG>
double uniform01(URBG& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

template <class URBG>
bool bernoulli(URBG& rng, double p) {
    return uniform01(rng) < p;
}

template <class T, class URBG>
void shuffle_vec(std::vector<T>& v, URBG& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = std::size_t(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace ecc
