#ifndef SGC_RNG_HPP
#define SGC_RNG_HPP

#include <cstdint>
#include <random>

namespace sgc {

// splitmix64 step; used to derive independent streams from (seed, ids...).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed) { return mix64(seed); }

template <class... Ids>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id, Ids... rest) {
    return derive_seed(mix64(seed ^ mix64(id)), rest...);
}

using Rng = std::mt19937_64;

template <class... Ids>
Rng make_rng(std::uint64_t seed, Ids... ids) {
    return Rng(derive_seed(seed, static_cast<std::uint64_t>(ids)...));
}

// Uniform double in [0,1) built from the top 53 bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Uniform integer in [0, n).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

}  // namespace sgc

#endif
